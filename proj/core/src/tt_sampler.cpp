#include "tesalocs/tt_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tesalocs/errors.hpp"
#include "tesalocs/random.hpp"

namespace tesalocs {

std::size_t categorical_inverse_cdf(const std::vector<double>& weights, double u) {
  if (weights.empty()) throw std::invalid_argument("categorical draw over no outcomes");
  double total = 0.0;
  for (double w : weights) total += std::max(w, 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("all weights are zero");
  const double target = u * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t m = 0; m < weights.size(); ++m) {
    if (weights[m] <= 0.0) continue;
    cum += weights[m];
    last_positive = m;
    if (cum > target) return m;
  }
  // u * total rounded up to the full sum
  return last_positive;
}

SampleBatch sample(const TTDistribution& t, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("sample: k must be positive");
  const std::size_t d = t.order();
  const auto suffix = scaled_suffix_interfaces(t);
  if (std::isinf(suffix[0].log_scale)) throw DegenerateModelError("sample: TT mass is zero");

  // Variates in sample-major order: u[l * d + i] drives mode i of sample l.
  Rng rng(seed);
  std::vector<double> u(k * d);
  for (double& x : u) x = uniform01(rng);

  SampleBatch batch;
  batch.indices.assign(k, MultiIndex(d));
  batch.log_weights.assign(k, 0.0);

  // cumulative[i][a * modes + m] = sum_{m' <= m} sum_b G_i[a, m', b] S_i[b].
  // The cumulative conditional weight of mode m is then sum_a v[a] cumulative[a, m],
  // so each draw is a binary search.
  std::vector<std::vector<double>> cumulative(d);
  for (std::size_t i = 0; i < d; ++i) {
    const TTCore& c = t.core(i);
    const auto& s = suffix[i + 1].values;
    auto& p = cumulative[i];
    p.resize(c.left * c.modes);
    for (std::size_t a = 0; a < c.left; ++a) {
      double run = 0.0;
      for (std::size_t m = 0; m < c.modes; ++m) {
        const double* g = &c.data[(a * c.modes + m) * c.right];
        double acc = 0.0;
        for (std::size_t b = 0; b < c.right; ++b) acc += g[b] * s[b];
        run += std::max(acc, 0.0);
        p[a * c.modes + m] = run;
      }
    }
  }

  std::vector<double> left;
  std::vector<double> next;
  for (std::size_t l = 0; l < k; ++l) {
    left.assign(1, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
      const TTCore& c = t.core(i);
      const double* p = cumulative[i].data();
      const auto cum_at = [&](std::size_t m) {
        double w = 0.0;
        for (std::size_t a = 0; a < c.left; ++a) w += left[a] * p[a * c.modes + m];
        return w;
      };
      const double total = cum_at(c.modes - 1);
      const double ul = u[l * d + i];
      std::size_t chosen;
      if (!(total > 0.0) || !std::isfinite(total)) {
        chosen = std::min(static_cast<std::size_t>(ul * static_cast<double>(c.modes)), c.modes - 1);
        ++batch.uniform_fallbacks;
      } else {
        // First m with cumulative weight above u * total; when rounding puts
        // the target at the total, the first m reaching the total.
        const double target = ul * total;
        const bool at_total = !(target < total);
        std::size_t lo = 0;
        std::size_t hi = c.modes - 1;
        while (lo < hi) {
          const std::size_t mid = lo + (hi - lo) / 2;
          const double w = cum_at(mid);
          if (at_total ? w >= total : w > target) {
            hi = mid;
          } else {
            lo = mid + 1;
          }
        }
        chosen = lo;
      }
      batch.indices[l][i] = chosen;

      next.assign(c.right, 0.0);
      for (std::size_t a = 0; a < c.left; ++a) {
        const double* g = &c.data[(a * c.modes + chosen) * c.right];
        for (std::size_t b = 0; b < c.right; ++b) next[b] += left[a] * g[b];
      }
      const double peak = *std::max_element(next.begin(), next.end());
      if (peak > 0.0) {
        for (double& x : next) x /= peak;
        batch.log_weights[l] += std::log(peak);
      } else {
        batch.log_weights[l] = -std::numeric_limits<double>::infinity();
        std::fill(next.begin(), next.end(), 1.0);
      }
      left.swap(next);
    }
  }
  return batch;
}

}  // namespace tesalocs
