#include "tesalocs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tesalocs {

SearchSpace::SearchSpace(std::vector<double> lower, std::vector<double> upper,
                         std::vector<std::size_t> nodes)
    : lower_(std::move(lower)), upper_(std::move(upper)), nodes_(std::move(nodes)) {
  if (lower_.empty()) throw std::invalid_argument("search space must have at least one dimension");
  if (upper_.size() != lower_.size() || nodes_.size() != lower_.size()) {
    throw std::invalid_argument("search space bounds and node counts differ in length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw std::invalid_argument("dimension " + std::to_string(i) + ": need finite a < b");
    }
    if (nodes_[i] < 2) {
      throw std::invalid_argument("dimension " + std::to_string(i) + ": need at least 2 nodes");
    }
  }
}

SearchSpace SearchSpace::uniform(std::size_t d, double lower, double upper, std::size_t nodes) {
  return SearchSpace(std::vector<double>(d, lower), std::vector<double>(d, upper),
                     std::vector<std::size_t>(d, nodes));
}

bool SearchSpace::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

Point SearchSpace::clamp(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("clamp: dimension mismatch");
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], lower_[i], upper_[i]);
  return out;
}

Point to_point(std::span<const std::size_t> idx, const SearchSpace& space) {
  if (idx.size() != space.dim()) throw std::out_of_range("to_point: dimension mismatch");
  Point x(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const std::size_t n = space.nodes()[i];
    if (idx[i] >= n) {
      throw std::out_of_range("to_point: index component " + std::to_string(i) + " out of range");
    }
    const double a = space.lower()[i];
    const double b = space.upper()[i];
    // exact endpoints regardless of rounding in the affine map
    if (idx[i] == n - 1) {
      x[i] = b;
    } else {
      x[i] = static_cast<double>(idx[i]) / static_cast<double>(n - 1) * (b - a) + a;
    }
  }
  return x;
}

MultiIndex to_index(std::span<const double> x, const SearchSpace& space) {
  if (x.size() != space.dim()) throw std::out_of_range("to_index: dimension mismatch");
  MultiIndex idx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = space.lower()[i];
    const double b = space.upper()[i];
    const double top = static_cast<double>(space.nodes()[i] - 1);
    const double c = (x[i] - a) / (b - a) * top;
    if (std::isnan(c) || c <= 0.0) {
      idx[i] = 0;
    } else if (c >= top) {
      idx[i] = space.nodes()[i] - 1;
    } else {
      idx[i] = static_cast<std::size_t>(std::nearbyint(c));
    }
  }
  return idx;
}

}  // namespace tesalocs
