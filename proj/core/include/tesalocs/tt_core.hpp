#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tesalocs {

/// Grid multi-index, 0-based in every mode.
using MultiIndex = std::vector<std::size_t>;

/// One three-way TT-core of shape (left, modes, right), row-major.
struct TTCore {
  std::size_t left = 1;
  std::size_t modes = 1;
  std::size_t right = 1;
  std::vector<double> data;

  TTCore() = default;
  TTCore(std::size_t left, std::size_t modes, std::size_t right, double fill = 0.0)
      : left(left), modes(modes), right(right), data(left * modes * right, fill) {}

  double& operator()(std::size_t a, std::size_t m, std::size_t b) {
    return data[(a * modes + m) * right + b];
  }
  double operator()(std::size_t a, std::size_t m, std::size_t b) const {
    return data[(a * modes + m) * right + b];
  }

  friend bool operator==(const TTCore&, const TTCore&) = default;
};

/// A non-negative tensor train read as an unnormalized probability over the
/// grid: p(n) = eval(n) / mass.
class TTDistribution {
 public:
  TTDistribution() = default;
  /// Validates that adjacent cores share rank dimensions, the boundary ranks
  /// are 1 and every entry is non-negative and finite.
  explicit TTDistribution(std::vector<TTCore> cores);

  std::size_t order() const { return cores_.size(); }
  std::vector<std::size_t> dims() const;
  /// R_0..R_d, with R_0 = R_d = 1.
  std::vector<std::size_t> ranks() const;
  std::size_t parameter_count() const;

  const TTCore& core(std::size_t i) const { return cores_.at(i); }
  TTCore& core(std::size_t i) { return cores_.at(i); }
  std::span<const TTCore> cores() const { return cores_; }
  std::span<TTCore> cores() { return cores_; }

  friend bool operator==(const TTDistribution&, const TTDistribution&) = default;

 private:
  std::vector<TTCore> cores_;
};

/// Rank-r TT with every mode of size n and entries drawn uniformly from (0, 1].
TTDistribution init_random(std::size_t d, std::size_t n, std::size_t r, std::uint64_t seed);
/// Same, with mode i of size dims[i].
TTDistribution init_random(std::span<const std::size_t> dims, std::size_t r, std::uint64_t seed);

/// A vector stored as values * exp(log_scale); contractions over long chains
/// keep values normalized to max 1 so nothing under- or overflows.
struct ScaledVector {
  std::vector<double> values;
  double log_scale = 0.0;
};

/// Tensor entry at idx. Throws std::out_of_range on a bad index component.
double eval(const TTDistribution& t, std::span<const std::size_t> idx);
/// log(eval); -inf when the entry is exactly zero.
double log_eval(const TTDistribution& t, std::span<const std::size_t> idx);

/// Sum of all entries. Throws DegenerateModelError when it is zero; may be
/// +inf for long chains, in which case use log_mass.
double mass(const TTDistribution& t);
double log_mass(const TTDistribution& t);

/// Sum over the mode index of core i: an (left x right) row-major matrix.
std::vector<double> mode_sum(const TTCore& core);

/// S_d = [1], S_{i-1} = (sum_m G_i[:, m, :]) S_i. Unscaled, index i holds S_i.
std::vector<std::vector<double>> suffix_interfaces(const TTDistribution& t);
/// Same recursion with per-step normalization.
std::vector<ScaledVector> scaled_suffix_interfaces(const TTDistribution& t);
/// A_0 = [1], A_i = A_{i-1} (sum_m G_i[:, m, :]), normalized per step.
std::vector<ScaledVector> scaled_prefix_interfaces(const TTDistribution& t);

/// Checkpoint layout:
///   {"format": "tesalocs-tt", "version": 1,
///    "cores": [{"shape": [R_{i-1}, N_i, R_i], "values": [row-major ...]}, ...]}
std::string serialize_checkpoint(const TTDistribution& t);
TTDistribution parse_checkpoint(std::string_view text);
void save_checkpoint(const TTDistribution& t, const std::filesystem::path& path);
TTDistribution load_checkpoint(const std::filesystem::path& path);

}  // namespace tesalocs
