#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tesalocs/errors.hpp"
#include "tesalocs/tt_learner.hpp"
#include "tesalocs/tt_sampler.hpp"

namespace {

using namespace tesalocs;

TTDistribution ones(std::size_t d, std::size_t n) {
  std::vector<TTCore> cores;
  for (std::size_t i = 0; i < d; ++i) cores.emplace_back(1, n, 1, 1.0);
  return TTDistribution(std::move(cores));
}

std::vector<MultiIndex> random_elites(const TTDistribution& t, std::size_t count, std::mt19937_64& rng) {
  std::vector<MultiIndex> out(count, MultiIndex(t.order()));
  for (auto& n : out) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      n[i] = std::uniform_int_distribution<std::size_t>(0, t.dims()[i] - 1)(rng);
    }
  }
  return out;
}

TEST(LogProb, UniformAndPointMass) {
  const auto u = ones(2, 3);
  for (const auto& n : oracle::enumerate(u.dims())) EXPECT_NEAR(log_prob(u, n), std::log(1.0 / 9.0), 1e-14);

  std::vector<TTCore> cores;
  cores.emplace_back(1, 3, 1, 0.0);
  cores[0].data[1] = 0.7;
  const TTDistribution point(std::move(cores));
  EXPECT_NEAR(log_prob(point, MultiIndex{1}), 0.0, 1e-15);
  EXPECT_NEAR(log_prob(point, MultiIndex{0}), std::log(kLogProbFloor) - std::log(0.7), 1e-9);
}

TEST(LogProb, NormalizesOnEnumerableInstances) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = oracle::random_tt(2 + trial % 3, 2 + trial % 3, 1 + trial % 3, rng);
    double s = 0.0;
    for (const auto& n : oracle::enumerate(t.dims())) {
      const double p = std::exp(log_prob(t, n));
      EXPECT_GE(p, 0.0);
      s += p;
    }
    EXPECT_NEAR(s, 1.0, 1e-8);
  }
}

TEST(NegLogLikelihood, SimpleCases) {
  EXPECT_NEAR(neg_log_likelihood(ones(1, 4), std::vector<MultiIndex>{{2}}), std::log(4.0), 1e-14);

  std::mt19937_64 rng(3);
  const auto t = oracle::random_tt(3, 3, 2, rng);
  const MultiIndex n{1, 0, 2};
  const double single = neg_log_likelihood(t, std::vector<MultiIndex>{n});
  EXPECT_NEAR(neg_log_likelihood(t, std::vector<MultiIndex>{n, n}), 2.0 * single, 1e-12);

  const auto elites = random_elites(t, 7, rng);
  EXPECT_NEAR(neg_log_likelihood(t, elites), oracle::nll(t, elites), 1e-10);
  EXPECT_THROW(neg_log_likelihood(t, std::vector<MultiIndex>{}), std::invalid_argument);
}

TEST(GradCores, SingleModeAnalyticCase) {
  const std::size_t n = 5;
  const auto g = grad_cores(ones(1, n), std::vector<MultiIndex>{{3}});
  ASSERT_EQ(g.size(), 1u);
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(g[0][j], 1.0 / n - (j == 3 ? 1.0 : 0.0), 1e-15);
  }
}

TEST(GradCores, MatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + trial % 4;
    const std::size_t n = 2 + trial % 3;
    const std::size_t r = 1 + trial % 3;
    const auto t = oracle::random_tt(d, n, r, rng, 0.1);
    const auto elites = random_elites(t, 1 + trial % 5, rng);
    const auto g = grad_cores(t, elites);
    const auto fd = oracle::fd_core_gradient(t, [&](const TTDistribution& p) { return oracle::nll(p, elites); });
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < g[i].size(); ++j) {
        EXPECT_NEAR(g[i][j], fd[i][j], 1e-5 * std::max(1.0, std::abs(fd[i][j])))
            << "trial " << trial << " core " << i << " entry " << j;
      }
    }
  }
}

TEST(GradCores, ZeroAlongCoreScalingDirection) {
  std::mt19937_64 rng(5);
  const auto t = oracle::random_tt(3, 3, 2, rng);
  const auto elites = random_elites(t, 4, rng);
  const auto g = grad_cores(t, elites);
  for (std::size_t i = 0; i < t.order(); ++i) {
    double directional = 0.0;
    for (std::size_t j = 0; j < g[i].size(); ++j) directional += g[i][j] * t.core(i).data[j];
    EXPECT_NEAR(directional, 0.0, 1e-12);
  }
}

TEST(GradCores, FiniteAtHundredModes) {
  const auto t = init_random(100, 32, 5, 1);
  const auto elites = sample(t, 10, 2).indices;
  for (const auto& gi : grad_cores(t, elites)) {
    for (double x : gi) ASSERT_TRUE(std::isfinite(x));
  }
}

TEST(Update, ZeroLearningRateLeavesCoresBitwise) {
  const auto t = init_random(4, 6, 3, 7);
  LearnerConfig cfg;
  cfg.learning_rate = 0.0;
  std::mt19937_64 rng(6);
  const auto elites = random_elites(t, 5, rng);
  EXPECT_EQ(update(t, elites, cfg), t);
  cfg.optimizer = OptimizerKind::plain_sgd;
  EXPECT_EQ(update(t, elites, cfg), t);
}

TEST(Update, SgdStepRaisesElitesConditional) {
  const std::size_t n = 6;
  LearnerConfig cfg;
  cfg.optimizer = OptimizerKind::plain_sgd;
  cfg.learning_rate = 0.1;
  const auto t = update(ones(1, n), std::vector<MultiIndex>{{2}}, cfg);
  EXPECT_GT(std::exp(log_prob(t, MultiIndex{2})), 1.0 / n);
}

TEST(Update, ArgmaxProbabilityGrowsMonotonically) {
  std::mt19937_64 rng(8);
  auto t = oracle::random_tt(2, 4, 2, rng);
  const auto full = oracle::full_tensor(t);
  const auto all = oracle::enumerate(t.dims());
  const MultiIndex target = all[std::max_element(full.begin(), full.end()) - full.begin()];
  Learner learner(LearnerConfig{});
  double previous = std::exp(log_prob(t, target));
  for (int step = 0; step < 50; ++step) {
    learner.update(t, std::vector<MultiIndex>{target});
    const double p = oracle::entry(t, target) / oracle::total(oracle::full_tensor(t));
    EXPECT_GT(p, previous) << "step " << step;
    previous = p;
  }
  EXPECT_GT(previous, 0.5);
}

TEST(Update, SgdLossDecreasesOnFixedElites) {
  std::mt19937_64 rng(9);
  auto t = oracle::random_tt(3, 3, 2, rng);
  const auto elites = random_elites(t, 6, rng);
  LearnerConfig cfg;
  cfg.optimizer = OptimizerKind::plain_sgd;
  cfg.learning_rate = 0.01;
  Learner learner(cfg);
  int decreases = 0;
  double loss = neg_log_likelihood(t, elites);
  for (int step = 0; step < 10; ++step) {
    learner.update(t, elites);
    const double next = neg_log_likelihood(t, elites);
    decreases += next < loss;
    loss = next;
  }
  EXPECT_GE(decreases, 9);
}

TEST(Update, KeepsModelValid) {
  auto t = init_random(5, 8, 3, 10);
  LearnerConfig cfg;
  cfg.optimizer = OptimizerKind::plain_sgd;
  cfg.learning_rate = 50.0;  // large enough to push entries below zero
  Learner learner(cfg);
  std::mt19937_64 rng(11);
  for (int step = 0; step < 5; ++step) learner.update(t, random_elites(t, 3, rng));
  for (const auto& c : t.cores()) {
    for (double x : c.data) EXPECT_GE(x, cfg.clamp_floor);
  }
  EXPECT_NO_THROW(TTDistribution(std::vector<TTCore>(t.cores().begin(), t.cores().end())));
  EXPECT_GT(mass(t), 0.0);
  EXPECT_EQ(t.dims(), std::vector<std::size_t>(5, 8));
}

TEST(Update, StepsPerIterationCompose) {
  const auto t = init_random(3, 4, 2, 12);
  const std::vector<MultiIndex> elites{{0, 1, 2}, {3, 3, 0}};
  LearnerConfig one;
  LearnerConfig three = one;
  three.steps_per_iteration = 3;
  Learner a(one);
  TTDistribution ta = t;
  for (int s = 0; s < 3; ++s) a.update(ta, elites);
  EXPECT_EQ(update(t, elites, three), ta);
}

TEST(Learner, RejectsBadConfig) {
  LearnerConfig cfg;
  cfg.learning_rate = -1.0;
  EXPECT_THROW(Learner{cfg}, std::invalid_argument);
  cfg.learning_rate = 0.1;
  cfg.clamp_floor = 0.0;
  EXPECT_THROW(Learner{cfg}, std::invalid_argument);
}

}  // namespace
