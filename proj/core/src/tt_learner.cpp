#include "tesalocs/tt_learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tesalocs/errors.hpp"

namespace tesalocs {

namespace {

void require_elites(std::span<const MultiIndex> elites) {
  if (elites.empty()) throw std::invalid_argument("elite set is empty");
}

double peak_normalize(std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, x);
  if (peak > 0.0) {
    for (double& x : v) x /= peak;
  }
  return peak;
}

}  // namespace

double log_prob(const TTDistribution& t, std::span<const std::size_t> idx) {
  const double lz = log_mass(t);
  return std::max(log_eval(t, idx), std::log(kLogProbFloor)) - lz;
}

double neg_log_likelihood(const TTDistribution& t, std::span<const MultiIndex> elites) {
  require_elites(elites);
  const double lz = log_mass(t);
  const double lfloor = std::log(kLogProbFloor);
  double loss = 0.0;
  for (const auto& n : elites) loss -= std::max(log_eval(t, n), lfloor) - lz;
  return loss;
}

namespace {

// grad_cores into a caller-owned buffer, reusing its storage.
void fill_gradients(const TTDistribution& t, std::span<const MultiIndex> elites,
                    CoreGradients& grad) {
  require_elites(elites);
  const std::size_t d = t.order();
  const double count = static_cast<double>(elites.size());
  const auto prefix = scaled_prefix_interfaces(t);
  const auto suffix = scaled_suffix_interfaces(t);

  grad.resize(d);
  // + |E| * d log Z / dG_i, identical for every mode index m
  for (std::size_t i = 0; i < d; ++i) {
    const TTCore& c = t.core(i);
    const auto& a = prefix[i].values;
    const auto& b = suffix[i + 1].values;
    const auto sum = mode_sum(c);
    double denom = 0.0;
    for (std::size_t x = 0; x < c.left; ++x) {
      for (std::size_t y = 0; y < c.right; ++y) denom += a[x] * sum[x * c.right + y] * b[y];
    }
    if (!(denom > 0.0)) throw DegenerateModelError("grad_cores: TT mass is zero");
    auto& g = grad[i];
    g.resize(c.data.size());
    std::vector<double> coef(c.right);
    for (std::size_t x = 0; x < c.left; ++x) {
      for (std::size_t y = 0; y < c.right; ++y) coef[y] = count * a[x] * b[y] / denom;
      for (std::size_t m = 0; m < c.modes; ++m) {
        std::copy(coef.begin(), coef.end(), g.begin() + static_cast<std::ptrdiff_t>((x * c.modes + m) * c.right));
      }
    }
  }

  // - d log eval(n) / dG_i for each elite, only on slice n_i
  std::vector<std::vector<double>> right(d + 1);
  std::vector<double> left;
  std::vector<double> next;
  for (const auto& n : elites) {
    if (n.size() != d) throw std::out_of_range("grad_cores: elite has wrong length");
    right[d] = {1.0};
    for (std::size_t i = d; i-- > 0;) {
      const TTCore& c = t.core(i);
      if (n[i] >= c.modes) throw std::out_of_range("grad_cores: elite index out of range");
      right[i].assign(c.left, 0.0);
      for (std::size_t x = 0; x < c.left; ++x) {
        const double* gr = &c.data[(x * c.modes + n[i]) * c.right];
        double acc = 0.0;
        for (std::size_t y = 0; y < c.right; ++y) acc += gr[y] * right[i + 1][y];
        right[i][x] = acc;
      }
      peak_normalize(right[i]);
    }
    left.assign(1, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
      const TTCore& c = t.core(i);
      const auto& r = right[i + 1];
      double denom = 0.0;
      for (std::size_t x = 0; x < c.left; ++x) {
        const double* gr = &c.data[(x * c.modes + n[i]) * c.right];
        for (std::size_t y = 0; y < c.right; ++y) denom += left[x] * gr[y] * r[y];
      }
      if (!(denom > 0.0)) throw DegenerateModelError("grad_cores: elite has zero probability");
      auto& g = grad[i];
      for (std::size_t x = 0; x < c.left; ++x) {
        double* row = &g[(x * c.modes + n[i]) * c.right];
        for (std::size_t y = 0; y < c.right; ++y) row[y] -= left[x] * r[y] / denom;
      }
      next.assign(c.right, 0.0);
      for (std::size_t x = 0; x < c.left; ++x) {
        const double* gr = &c.data[(x * c.modes + n[i]) * c.right];
        for (std::size_t y = 0; y < c.right; ++y) next[y] += left[x] * gr[y];
      }
      peak_normalize(next);
      left.swap(next);
    }
  }
}

}  // namespace

CoreGradients grad_cores(const TTDistribution& t, std::span<const MultiIndex> elites) {
  CoreGradients grad;
  fill_gradients(t, elites, grad);
  return grad;
}

Learner::Learner(LearnerConfig cfg) : cfg_(cfg) {
  if (!(cfg_.learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
  if (!(cfg_.clamp_floor > 0.0)) throw std::invalid_argument("clamp floor must be positive");
}

void Learner::update(TTDistribution& t, std::span<const MultiIndex> elites) {
  require_elites(elites);
  if (cfg_.learning_rate == 0.0) return;
  for (std::size_t s = 0; s < cfg_.steps_per_iteration; ++s) {
    fill_gradients(t, elites, gradient_);
    step(t, gradient_);
  }
}

void Learner::step(TTDistribution& t, const CoreGradients& g) {
  for (const auto& gi : g) {
    for (double x : gi) {
      if (!std::isfinite(x)) throw DegenerateModelError("non-finite gradient in TT update");
    }
  }
  const double lr = cfg_.learning_rate;
  const double floor = cfg_.clamp_floor;
  if (cfg_.optimizer == OptimizerKind::plain_sgd) {
    for (std::size_t i = 0; i < t.order(); ++i) {
      auto& data = t.core(i).data;
      for (std::size_t j = 0; j < data.size(); ++j) {
        data[j] = std::max(data[j] - lr * g[i][j], floor);
      }
    }
    return;
  }

  if (first_moment_.size() != t.order()) {
    first_moment_.assign(t.order(), {});
    second_moment_.assign(t.order(), {});
    for (std::size_t i = 0; i < t.order(); ++i) {
      first_moment_[i].assign(t.core(i).data.size(), 0.0);
      second_moment_[i].assign(t.core(i).data.size(), 0.0);
    }
  }
  ++steps_taken_;
  const double b1 = cfg_.beta1;
  const double b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_taken_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_taken_));
  for (std::size_t i = 0; i < t.order(); ++i) {
    auto& data = t.core(i).data;
    auto& m = first_moment_[i];
    auto& v = second_moment_[i];
    if (m.size() != data.size()) throw std::invalid_argument("learner state does not match model");
    const double* gi = g[i].data();
    const double lr_hat = lr / c1;
    const double inv_c2 = 1.0 / c2;
    const double eps = cfg_.epsilon;
    for (std::size_t j = 0; j < data.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * gi[j];
      v[j] = b2 * v[j] + (1.0 - b2) * gi[j] * gi[j];
      const double step = lr_hat * m[j] / (std::sqrt(v[j] * inv_c2) + eps);
      data[j] = std::max(data[j] - step, floor);
    }
  }
}

TTDistribution update(const TTDistribution& t, std::span<const MultiIndex> elites,
                      const LearnerConfig& cfg) {
  TTDistribution out = t;
  Learner learner(cfg);
  learner.update(out, elites);
  return out;
}

}  // namespace tesalocs
