#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tesalocs/tt_core.hpp"

namespace tesalocs {

struct SampleBatch {
  std::vector<MultiIndex> indices;
  /// log eval(t, indices[l]) for every sample.
  std::vector<double> log_weights;
  /// Modes where every conditional weight came out zero and the draw fell
  /// back to uniform. Stays 0 for any valid non-negative model.
  std::size_t uniform_fallbacks = 0;
};

/// Draws k independent multi-indices with probability eval(t, n) / mass(t).
///
/// Sequential conditional sampling: with suffix interfaces S_i precomputed
/// and a running left interface v, mode i uses weights
/// w(m) = v G_i[:, m, :] S_i and an inverse-CDF categorical draw. One
/// uniform variate per mode. Cumulative sums of G_i S_i are built once per
/// call (O(d n r^2)), after which a draw is a binary search: O(d r log n)
/// per sample.
SampleBatch sample(const TTDistribution& t, std::size_t k, std::uint64_t seed);

/// Index of the categorical draw for uniform variate u in [0, 1) over
/// non-negative weights. Never returns an index with zero weight when the
/// total is positive.
std::size_t categorical_inverse_cdf(const std::vector<double>& weights, double u);

}  // namespace tesalocs
