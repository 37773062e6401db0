#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tesalocs/tt_core.hpp"

namespace tesalocs {

using Point = std::vector<double>;

/// Box [lower, upper] discretized by a uniform grid of `nodes[i]` points per
/// dimension, endpoints included.
class SearchSpace {
 public:
  SearchSpace(std::vector<double> lower, std::vector<double> upper, std::vector<std::size_t> nodes);
  /// Same box and node count in every dimension.
  static SearchSpace uniform(std::size_t d, double lower, double upper, std::size_t nodes);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<std::size_t>& nodes() const { return nodes_; }

  bool contains(std::span<const double> x) const;
  /// Componentwise clamp into the box.
  Point clamp(std::span<const double> x) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::size_t> nodes_;
};

/// Multi-index to point: x_i = idx_i / (N_i - 1) * (b_i - a_i) + a_i.
Point to_point(std::span<const std::size_t> idx, const SearchSpace& space);

/// Point to multi-index: c_i = (x_i - a_i) / (b_i - a_i) * (N_i - 1), rounded
/// half-to-even and clamped to [0, N_i - 1]. Total for finite input; NaN maps to 0.
MultiIndex to_index(std::span<const double> x, const SearchSpace& space);

}  // namespace tesalocs
