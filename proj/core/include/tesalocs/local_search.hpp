#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tesalocs/grid.hpp"
#include "tesalocs/objective.hpp"

namespace tesalocs {

enum class LocalMethod { bfgs, cg, pso, spsa, none };

std::string_view to_string(LocalMethod m);
/// Throws std::invalid_argument for an unknown name.
LocalMethod parse_local_method(std::string_view name);

/// Where gradient-based methods get derivatives from. `automatic` uses the
/// objective's analytic gradient when it has one (one query per call) and
/// central differences otherwise (2d queries).
enum class GradientSource { automatic, numerical };

struct ArmijoParams {
  double c1 = 1e-4;
  double backtrack = 0.5;
  std::size_t max_backtracks = 30;
};

struct PsoParams {
  std::size_t swarm_size = 10;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
  /// Half-width of the initial swarm box around the start, as a fraction of
  /// the search box width per dimension.
  double init_radius = 0.1;
};

/// Gains a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma, applied in
/// box-normalized coordinates. `a` is calibrated from the first gradient
/// estimate so the first step moves each coordinate by about initial_step.
struct SpsaParams {
  double initial_step = 0.05;
  double c = 0.05;
  double stability = 10.0;
  double alpha = 0.602;
  double gamma = 0.101;
};

struct LocalSearchConfig {
  LocalMethod method = LocalMethod::bfgs;
  /// Per-start query cap. The driver fills in a budget-aware value when this
  /// is left unset.
  std::optional<std::size_t> max_evals_per_candidate;
  /// Relative central-difference step: h_i = fd_step * max(1, |x_i|).
  double fd_step = 1e-6;
  GradientSource gradient = GradientSource::automatic;
  ArmijoParams line_search;
  PsoParams pso;
  SpsaParams spsa;
  double gradient_tolerance = 1e-8;
  double value_tolerance = 1e-12;
  std::uint64_t seed = 0;
};

struct LocalSearchResult {
  std::vector<Point> refined_points;
  /// values[l] is the recorded evaluation at refined_points[l].
  std::vector<double> values;
  /// m_loc: every query consumed, gradient probes included.
  std::size_t evals_spent = 0;
  /// True when the global budget ran out; results hold the finished runs plus
  /// the best point of the interrupted one.
  bool budget_exhausted = false;
};

/// Central-difference gradient, exactly 2d evaluations. Throws
/// BudgetExhausted without spending anything when fewer than 2d remain.
std::vector<double> numerical_gradient(MeteredObjective& f, std::span<const double> x,
                                       double fd_step);

/// Runs cfg.method independently from every start (clamped into `box`).
/// Each run stops on its own convergence test, on the per-candidate cap, or
/// when the objective's budget is exhausted.
LocalSearchResult refine(MeteredObjective& f, std::span<const Point> starts,
                         const SearchSpace& box, const LocalSearchConfig& cfg);

}  // namespace tesalocs
