#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "tesalocs/benchmarks.hpp"
#include "tesalocs/driver.hpp"

namespace {

using namespace tesalocs;

Objective trap_objective(std::size_t d) {
  Objective o;
  o.dim = d;
  o.value = [](std::span<const double> x) { return oracle::trap(std::vector<double>(x.begin(), x.end())); };
  return o;
}

double exhaustive_trap_minimum(const SearchSpace& space) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& idx : oracle::enumerate(space.nodes())) {
    std::vector<double> x(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      x[i] = space.lower()[i] + (space.upper()[i] - space.lower()[i]) * static_cast<double>(idx[i]) /
                                    static_cast<double>(space.nodes()[i] - 1);
    }
    best = std::min(best, oracle::trap(x));
  }
  return best;
}

TesalocsConfig small_config(std::uint64_t seed) {
  TesalocsConfig cfg;
  cfg.budget = 2000;
  cfg.grid_nodes = 32;
  cfg.rank = 3;
  cfg.batch = 20;
  cfg.elite = 4;
  cfg.seed = seed;
  return cfg;
}

std::string trace_csv(const RunTrace& t) {
  std::ostringstream out;
  write_trace_csv(out, t);
  return out.str();
}

TEST(Driver, DiscreteModeFindsTheTrapMinimum) {
  const auto space = SearchSpace::uniform(5, 0.0, 10.0, 11);
  const double target = exhaustive_trap_minimum(space);
  ASSERT_EQ(target, 0.0);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TesalocsConfig cfg;
    cfg.budget = 5000;
    cfg.grid_nodes = 11;
    cfg.local.method = LocalMethod::none;
    cfg.seed = seed;
    const auto trace = run(trap_objective(5), space, cfg);
    hits += trace.best_value == target;
  }
  EXPECT_GE(hits, 9);
}

TEST(Driver, ZeroLearningRateKeepsTheInitialModel) {
  const auto& fn = find_function("rastrigin");
  const auto space = fn.search_space(6, 16);
  TesalocsConfig cfg = small_config(3);
  cfg.elite = cfg.batch;
  cfg.learner.learning_rate = 0.0;
  const auto trace = run(fn.objective(6), space, cfg);
  ASSERT_TRUE(trace.final_model.has_value());
  EXPECT_EQ(*trace.final_model, initial_model(space, cfg));
}

TEST(Driver, LearningMovesTheModel) {
  const auto& fn = find_function("sphere");
  const auto space = fn.search_space(6, 16);
  const auto cfg = small_config(3);
  const auto trace = run(fn.objective(6), space, cfg);
  EXPECT_NE(*trace.final_model, initial_model(space, cfg));
}

TEST(Driver, BudgetIsConserved) {
  std::mt19937_64 rng(1);
  const LocalMethod methods[] = {LocalMethod::bfgs, LocalMethod::cg, LocalMethod::pso, LocalMethod::spsa,
                                 LocalMethod::none};
  for (int trial = 0; trial < 20; ++trial) {
    const auto& fn = catalog()[rng() % catalog().size()];
    const std::size_t d = 2 + rng() % 6;
    TesalocsConfig cfg;
    cfg.budget = 100 + rng() % 1500;
    cfg.grid_nodes = 4 + rng() % 30;
    cfg.rank = 1 + rng() % 4;
    cfg.batch = 1 + rng() % 40;
    cfg.elite = 1 + rng() % cfg.batch;
    cfg.local.method = methods[rng() % 5];
    cfg.local.gradient = rng() % 2 ? GradientSource::numerical : GradientSource::automatic;
    cfg.seed = rng();
    const bool baseline = rng() % 2;
    // Uncapped counter with earlier queries on it: the run must count relative to entry.
    MeteredObjective f(fn.objective(d));
    f(Point(d, 0.1));
    const auto space = fn.search_space(d, cfg.grid_nodes);
    const auto trace = baseline ? run_baseline(f, space, cfg) : run(f, space, cfg);

    std::size_t sum = 0;
    for (const auto& r : trace.records) sum += r.local_evals;
    EXPECT_EQ(sum, trace.evaluations) << "trial " << trial;
    EXPECT_EQ(f.evaluations_used(), 1 + trace.evaluations) << "trial " << trial;
    EXPECT_LE(trace.evaluations, cfg.budget) << "trial " << trial;
    EXPECT_FALSE(f.evaluation_cap().has_value());
    // The loop stops the first time the budget is reached.
    for (std::size_t j = 0; j + 1 < trace.records.size(); ++j) EXPECT_LT(trace.records[j].evals, cfg.budget);
  }
}

TEST(Driver, BestSoFarIsMonotoneAndMatchesTheBestPoint) {
  const auto& fn = find_function("ackley");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto trace = run(fn.objective(8), fn.search_space(8, 64), small_config(seed));
    ASSERT_FALSE(trace.records.empty());
    for (std::size_t j = 1; j < trace.records.size(); ++j) {
      EXPECT_LE(trace.records[j].best_value, trace.records[j - 1].best_value);
      EXPECT_GT(trace.records[j].evals, trace.records[j - 1].evals);
    }
    EXPECT_EQ(trace.records.back().best_value, trace.best_value);
    EXPECT_EQ(fn.value(trace.best_point), trace.best_value);
  }
}

TEST(Driver, SameSeedGivesIdenticalTraces) {
  const auto& fn = find_function("rosenbrock");
  for (auto method : {LocalMethod::bfgs, LocalMethod::pso, LocalMethod::spsa}) {
    TesalocsConfig cfg = small_config(11);
    cfg.local.method = method;
    const auto a = run(fn.objective(5), fn.search_space(5, 32), cfg);
    const auto b = run(fn.objective(5), fn.search_space(5, 32), cfg);
    EXPECT_EQ(trace_csv(a), trace_csv(b));
    EXPECT_EQ(a.best_point, b.best_point);
    cfg.seed = 12;
    EXPECT_NE(trace_csv(a), trace_csv(run(fn.objective(5), fn.search_space(5, 32), cfg)));
  }
}

TEST(Driver, BudgetSmallerThanOneBatchKeepsWhatCompleted) {
  const auto& fn = find_function("sphere");
  TesalocsConfig cfg = small_config(0);
  cfg.budget = 7;
  cfg.local.method = LocalMethod::none;
  const auto trace = run(fn.objective(3), fn.search_space(3, 16), cfg);
  EXPECT_EQ(trace.evaluations, 7u);
  EXPECT_TRUE(trace.budget_exhausted);
  EXPECT_TRUE(std::isfinite(trace.best_value));
  ASSERT_EQ(trace.records.size(), 1u);
}

TEST(Driver, RejectsMismatchedSpaceAndBadConfig) {
  const auto& fn = find_function("sphere");
  EXPECT_THROW(run(fn.objective(3), fn.search_space(4, 16), small_config(0)), std::invalid_argument);
  TesalocsConfig cfg = small_config(0);
  cfg.elite = cfg.batch + 1;
  EXPECT_THROW(run(fn.objective(3), fn.search_space(3, 16), cfg), std::invalid_argument);
  cfg = small_config(0);
  cfg.budget = 0;
  EXPECT_THROW(run(fn.objective(3), fn.search_space(3, 16), cfg), std::invalid_argument);
}

TEST(Baseline, BfgsSolvesSphere) {
  const auto& fn = find_function("sphere");
  LocalSearchConfig local;
  const auto trace = run_baseline(fn.objective(10), fn.search_space(10, 16), local, 2000, 4);
  EXPECT_LT(trace.best_value, 1e-10);
}

TEST(Baseline, WithoutLocalSearchIsRandomSearch) {
  const auto& fn = find_function("griewank");
  const auto space = fn.search_space(4, 16);
  auto log = std::make_shared<std::vector<double>>();
  Objective o = fn.objective(4);
  o.value = [v = o.value, log](std::span<const double> x) {
    const double y = v(x);
    log->push_back(y);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_TRUE(x[i] >= -600.0 && x[i] <= 600.0);
    return y;
  };
  LocalSearchConfig local;
  local.method = LocalMethod::none;
  const auto trace = run_baseline(o, space, local, 1000, 5);
  ASSERT_EQ(log->size(), 1000u);
  EXPECT_EQ(trace.records.size(), 10u);  // batches of the default 100
  EXPECT_EQ(trace.best_value, *std::min_element(log->begin(), log->end()));
}

TEST(Baseline, IsDeterministic) {
  const auto& fn = find_function("rastrigin");
  const auto cfg = small_config(9);
  const auto a = run_baseline(fn.objective(4), fn.search_space(4, 16), cfg);
  const auto b = run_baseline(fn.objective(4), fn.search_space(4, 16), cfg);
  EXPECT_EQ(trace_csv(a), trace_csv(b));
  EXPECT_FALSE(a.final_model.has_value());
}

TEST(Negate, FlipsValueAndGradient) {
  const auto& fn = find_function("sphere");
  const Objective n = negate(fn.objective(2));
  const std::vector<double> x{1.0, -2.0};
  EXPECT_EQ(n.value(x), -5.0);
  std::vector<double> g(2);
  n.gradient(x, g);
  EXPECT_EQ(g, (std::vector<double>{-2.0, 4.0}));
}

TEST(TraceOutput, CsvAndSummary) {
  RunTrace t;
  t.records.push_back({0, 100, 100, 0.1});
  t.records.push_back({1, 200, 100, 1.0 / 3.0});
  t.best_value = 1.0 / 3.0;
  t.best_point = {0.5};
  t.evaluations = 200;
  EXPECT_EQ(trace_csv(t), "iteration,evals,best_value\n0,100,0.10000000000000001\n1,200,0.33333333333333331\n");
  const auto j = nlohmann::json::parse(trace_summary_json(t));
  EXPECT_EQ(j["best_value"].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(j["evaluations"].get<std::size_t>(), 200u);
  EXPECT_EQ(j["iterations"].get<std::size_t>(), 2u);
}

TEST(DefaultCap, FloorsAndBudgetShare) {
  TesalocsConfig cfg;
  cfg.expected_outer_iterations = 10;
  EXPECT_EQ(default_candidate_cap(cfg, 100, true), 10u);
  EXPECT_EQ(default_candidate_cap(cfg, 100, false), 1000u);
  cfg.local.method = LocalMethod::pso;
  EXPECT_EQ(default_candidate_cap(cfg, 100, false), 10u);
  cfg.budget = 1000000;
  EXPECT_EQ(default_candidate_cap(cfg, 100, true), 1000u);
}

}  // namespace
