#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tesalocs/grid.hpp"
#include "tesalocs/local_search.hpp"
#include "tesalocs/objective.hpp"
#include "tesalocs/tt_learner.hpp"

namespace tesalocs {

struct TesalocsConfig {
  /// M: total objective queries per run.
  std::size_t budget = 10000;
  /// N: grid nodes per dimension.
  std::size_t grid_nodes = 1024;
  std::size_t rank = 5;
  /// k: candidates sampled per outer iteration.
  std::size_t batch = 100;
  /// k_top: elites fed to the learner.
  std::size_t elite = 10;
  LearnerConfig learner;
  LocalSearchConfig local;
  std::uint64_t seed = 0;
  /// Outer iterations the default per-candidate cap plans for:
  /// cap = M / (k * expected_outer_iterations).
  std::size_t expected_outer_iterations = 10;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Per-start query cap used when cfg.local.max_evals_per_candidate is unset.
/// Never below the floor of 10 queries, or 10 d when gradients come from
/// finite differences.
std::size_t default_candidate_cap(const TesalocsConfig& cfg, std::size_t dim,
                                  bool analytic_gradient);

struct TraceRecord {
  std::size_t iteration = 0;
  /// Queries consumed so far, this iteration included.
  std::size_t evals = 0;
  /// m_loc of this iteration.
  std::size_t local_evals = 0;
  double best_value = std::numeric_limits<double>::infinity();
};

struct RunTrace {
  std::vector<TraceRecord> records;
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  /// Queries charged to the objective during the run.
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
  /// The TT model at the end of a run(); empty for run_baseline().
  std::optional<TTDistribution> final_model;
};

/// The random TT model run() starts from for this space and cfg.seed.
TTDistribution initial_model(const SearchSpace& space, const TesalocsConfig& cfg);

/// Sample, refine, select elites, update the TT model; repeat while fewer
/// than cfg.budget queries were spent. Minimizes.
///
/// The metered overload charges `f` as it goes, never more than cfg.budget
/// queries beyond its count at entry; its own cap is restored on return. The
/// plain overload wraps the objective with a hard cap of cfg.budget.
/// Throws DegenerateModelError when the model can no longer be updated.
RunTrace run(MeteredObjective& f, const SearchSpace& space, const TesalocsConfig& cfg);
RunTrace run(const Objective& f, const SearchSpace& space, const TesalocsConfig& cfg);

/// Multistart baseline: uniform random starts in the box, drawn cfg.batch at a
/// time, refined with cfg.local until cfg.budget is spent. Uses the same
/// local-search seeds as run() for a given cfg.seed, so the two arms are paired.
RunTrace run_baseline(MeteredObjective& f, const SearchSpace& space, const TesalocsConfig& cfg);
RunTrace run_baseline(const Objective& f, const SearchSpace& space, const TesalocsConfig& cfg);
RunTrace run_baseline(const Objective& f, const SearchSpace& space, const LocalSearchConfig& local,
                      std::size_t budget, std::uint64_t seed);

/// x -> -f(x), for maximizing with the minimizing driver.
Objective negate(Objective f);

/// Header `iteration,evals,best_value`, one row per record, values in %.17g.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
/// Run summary: best value and point, evaluations, iterations.
std::string trace_summary_json(const RunTrace& trace);

}  // namespace tesalocs
