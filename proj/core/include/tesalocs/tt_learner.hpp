#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tesalocs/tt_core.hpp"

namespace tesalocs {

enum class OptimizerKind { plain_sgd, adaptive_moment };

struct LearnerConfig {
  double learning_rate = 0.1;
  std::size_t steps_per_iteration = 1;
  /// Smallest value a core entry may take after a step.
  double clamp_floor = 1e-12;
  OptimizerKind optimizer = OptimizerKind::adaptive_moment;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Guard inside log(eval) so a vanishing entry yields a finite log-probability.
inline constexpr double kLogProbFloor = 1e-300;

/// log p(idx) = log(max(eval, floor)) - log(mass).
double log_prob(const TTDistribution& t, std::span<const std::size_t> idx);

/// L = -sum over elites of log p(n). Duplicates count multiply.
double neg_log_likelihood(const TTDistribution& t, std::span<const MultiIndex> elites);

/// dL/dG_i for every core, each laid out like TTCore::data.
using CoreGradients = std::vector<std::vector<double>>;

/// Analytic gradient of neg_log_likelihood.
///
/// For an elite n, d eval / d G_i[a, m, b] = [m == n_i] L_{i-1}[a] R_i[b], with
/// L and R the partial slice products left and right of mode i. The mass
/// term d Z / d G_i[a, m, b] = A_{i-1}[a] B_i[b] uses mode-summed prefix and
/// suffix interfaces and does not depend on m. Both are divided by their
/// full contraction, so interface scales cancel.
CoreGradients grad_cores(const TTDistribution& t, std::span<const MultiIndex> elites);

/// Stateful optimizer over the cores of one model. Moment estimates persist
/// across update() calls.
class Learner {
 public:
  explicit Learner(LearnerConfig cfg);

  const LearnerConfig& config() const { return cfg_; }

  /// cfg.steps_per_iteration descent steps on L(elites); every entry is
  /// clamped to >= clamp_floor after each step. Throws DegenerateModelError
  /// on a non-finite gradient.
  void update(TTDistribution& t, std::span<const MultiIndex> elites);

 private:
  void step(TTDistribution& t, const CoreGradients& g);

  LearnerConfig cfg_;
  CoreGradients first_moment_;
  CoreGradients second_moment_;
  CoreGradients gradient_;
  std::size_t steps_taken_ = 0;
};

/// One-shot update with a fresh optimizer state.
TTDistribution update(const TTDistribution& t, std::span<const MultiIndex> elites,
                      const LearnerConfig& cfg);

}  // namespace tesalocs
