#include "tesalocs/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tesalocs/random.hpp"
#include "tesalocs/tt_sampler.hpp"

namespace tesalocs {

namespace {

// Independent RNG streams derived from the run seed.
constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kSampleStream = 2;
constexpr std::uint64_t kLocalStream = 3;
constexpr std::uint64_t kStartStream = 4;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::size_t iteration) {
  return mix_seed(mix_seed(seed, stream), iteration);
}

double sort_key(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

void check_space(const MeteredObjective& f, const SearchSpace& space) {
  if (space.dim() != f.dim()) {
    throw std::invalid_argument("search space dimension " + std::to_string(space.dim()) +
                                " does not match objective dimension " + std::to_string(f.dim()));
  }
}

LocalSearchConfig resolve_local(const TesalocsConfig& cfg, const MeteredObjective& f,
                                std::size_t iteration) {
  LocalSearchConfig local = cfg.local;
  if (!local.max_evals_per_candidate) {
    const bool analytic = f.has_gradient() && local.gradient == GradientSource::automatic;
    local.max_evals_per_candidate = default_candidate_cap(cfg, f.dim(), analytic);
  }
  local.seed = stream_seed(cfg.seed, kLocalStream, iteration);
  return local;
}

// Folds one refined batch into the trace; returns the batch order sorted by value.
std::vector<std::size_t> absorb(RunTrace& trace, const LocalSearchResult& res) {
  std::vector<std::size_t> order(res.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sort_key(res.values[a]) < sort_key(res.values[b]);
  });
  if (!order.empty() && sort_key(res.values[order[0]]) < trace.best_value) {
    trace.best_value = res.values[order[0]];
    trace.best_point = res.refined_points[order[0]];
  }
  return order;
}

// Tightens the objective's cap to the run budget and restores it on exit.
class RunCap {
 public:
  RunCap(MeteredObjective& f, std::size_t budget) : f_(f), saved_(f.evaluation_cap()) {
    const std::size_t used = f.evaluations_used();
    const std::size_t limit = budget > SIZE_MAX - used ? SIZE_MAX : used + budget;
    if (!saved_ || *saved_ > limit) f.set_evaluation_cap(limit);
  }
  ~RunCap() { f_.set_evaluation_cap(saved_); }
  RunCap(const RunCap&) = delete;
  RunCap& operator=(const RunCap&) = delete;

 private:
  MeteredObjective& f_;
  std::optional<std::size_t> saved_;
};

template <typename Starts>
RunTrace outer_loop(MeteredObjective& f, const SearchSpace& space, const TesalocsConfig& cfg,
                    Starts& next_starts) {
  cfg.validate();
  check_space(f, space);
  RunTrace trace;
  const std::size_t start = f.evaluations_used();
  const RunCap cap(f, cfg.budget);
  for (std::size_t it = 0; f.evaluations_used() - start < cfg.budget; ++it) {
    const std::vector<Point> starts = next_starts(it);
    const LocalSearchResult res = refine(f, starts, space, resolve_local(cfg, f, it));
    const std::vector<std::size_t> order = absorb(trace, res);
    TraceRecord rec;
    rec.iteration = it;
    rec.evals = f.evaluations_used() - start;
    rec.local_evals = res.evals_spent;
    rec.best_value = trace.best_value;
    trace.records.push_back(rec);
    if (res.budget_exhausted) {
      trace.budget_exhausted = true;
      break;
    }
    next_starts.learn(res, order);
  }
  trace.evaluations = f.evaluations_used() - start;
  return trace;
}

struct TtStarts {
  const SearchSpace& space;
  const TesalocsConfig& cfg;
  TTDistribution model;
  Learner learner;

  std::vector<Point> operator()(std::size_t it) const {
    const SampleBatch batch = sample(model, cfg.batch, stream_seed(cfg.seed, kSampleStream, it));
    std::vector<Point> starts;
    starts.reserve(batch.indices.size());
    for (const auto& idx : batch.indices) starts.push_back(to_point(idx, space));
    return starts;
  }

  void learn(const LocalSearchResult& res, const std::vector<std::size_t>& order) {
    std::vector<MultiIndex> elites;
    for (std::size_t j = 0; j < order.size() && elites.size() < cfg.elite; ++j) {
      if (!std::isfinite(res.values[order[j]])) break;
      elites.push_back(to_index(res.refined_points[order[j]], space));
    }
    if (!elites.empty()) learner.update(model, elites);
  }
};

struct UniformStarts {
  const SearchSpace& space;
  const TesalocsConfig& cfg;

  std::vector<Point> operator()(std::size_t it) const {
    Rng rng(stream_seed(cfg.seed, kStartStream, it));
    std::vector<Point> starts(cfg.batch, Point(space.dim()));
    for (auto& x : starts) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = uniform(rng, space.lower()[i], space.upper()[i]);
      }
    }
    return starts;
  }

  void learn(const LocalSearchResult&, const std::vector<std::size_t>&) {}
};

}  // namespace

void TesalocsConfig::validate() const {
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  if (grid_nodes < 2) throw std::invalid_argument("grid_nodes must be at least 2");
  if (rank == 0) throw std::invalid_argument("rank must be positive");
  if (batch == 0) throw std::invalid_argument("batch must be positive");
  if (elite == 0 || elite > batch) throw std::invalid_argument("elite must be in [1, batch]");
  if (expected_outer_iterations == 0) {
    throw std::invalid_argument("expected_outer_iterations must be positive");
  }
  if (!(learner.learning_rate >= 0.0) || !std::isfinite(learner.learning_rate)) {
    throw std::invalid_argument("learning rate must be finite and non-negative");
  }
  if (local.max_evals_per_candidate && *local.max_evals_per_candidate == 0) {
    throw std::invalid_argument("max_evals_per_candidate must be positive");
  }
}

std::size_t default_candidate_cap(const TesalocsConfig& cfg, std::size_t dim,
                                  bool analytic_gradient) {
  const bool finite_differences =
      !analytic_gradient && (cfg.local.method == LocalMethod::bfgs || cfg.local.method == LocalMethod::cg);
  const std::size_t floor = finite_differences ? 10 * dim : 10;
  const std::size_t planned = cfg.budget / (cfg.batch * cfg.expected_outer_iterations);
  return std::max(floor, planned);
}

TTDistribution initial_model(const SearchSpace& space, const TesalocsConfig& cfg) {
  return init_random(space.nodes(), cfg.rank, mix_seed(cfg.seed, kModelStream));
}

RunTrace run(MeteredObjective& f, const SearchSpace& space, const TesalocsConfig& cfg) {
  cfg.validate();
  TtStarts starts{space, cfg, initial_model(space, cfg), Learner(cfg.learner)};
  RunTrace trace = outer_loop(f, space, cfg, starts);
  trace.final_model = std::move(starts.model);
  return trace;
}

RunTrace run(const Objective& f, const SearchSpace& space, const TesalocsConfig& cfg) {
  MeteredObjective metered(f, cfg.budget);
  return run(metered, space, cfg);
}

RunTrace run_baseline(MeteredObjective& f, const SearchSpace& space, const TesalocsConfig& cfg) {
  UniformStarts starts{space, cfg};
  return outer_loop(f, space, cfg, starts);
}

RunTrace run_baseline(const Objective& f, const SearchSpace& space, const TesalocsConfig& cfg) {
  MeteredObjective metered(f, cfg.budget);
  return run_baseline(metered, space, cfg);
}

RunTrace run_baseline(const Objective& f, const SearchSpace& space, const LocalSearchConfig& local,
                      std::size_t budget, std::uint64_t seed) {
  TesalocsConfig cfg;
  cfg.local = local;
  cfg.budget = budget;
  cfg.seed = seed;
  return run_baseline(f, space, cfg);
}

Objective negate(Objective f) {
  Objective out;
  out.dim = f.dim;
  out.value = [v = f.value](std::span<const double> x) { return -v(x); };
  if (f.gradient) {
    out.gradient = [g = f.gradient](std::span<const double> x, std::span<double> grad) {
      g(x, grad);
      for (double& c : grad) c = -c;
    };
  }
  return out;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "iteration,evals,best_value\n";
  char buf[64];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%.17g", r.best_value);
    out << r.iteration << ',' << r.evals << ',' << buf << '\n';
  }
}

std::string trace_summary_json(const RunTrace& trace) {
  nlohmann::json j;
  j["best_value"] = std::isfinite(trace.best_value) ? nlohmann::json(trace.best_value) : nlohmann::json();
  j["best_point"] = trace.best_point;
  j["evaluations"] = trace.evaluations;
  j["iterations"] = trace.records.size();
  j["budget_exhausted"] = trace.budget_exhausted;
  return j.dump(2);
}

}  // namespace tesalocs
