#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "tesalocs/tt_core.hpp"
#include "tesalocs/tt_sampler.hpp"

namespace {

using namespace tesalocs;

double total_variation(const TTDistribution& t, const SampleBatch& batch) {
  const auto all = oracle::enumerate(t.dims());
  const auto full = oracle::full_tensor(t);
  const double z = oracle::total(full);
  std::map<MultiIndex, double> freq;
  for (const auto& n : batch.indices) freq[n] += 1.0 / static_cast<double>(batch.indices.size());
  double tv = 0.0;
  for (std::size_t j = 0; j < all.size(); ++j) {
    const auto it = freq.find(all[j]);
    tv += std::abs((it == freq.end() ? 0.0 : it->second) - full[j] / z);
  }
  return 0.5 * tv;
}

TEST(Sampler, EmpiricalDistributionMatchesEnumeration) {
  std::mt19937_64 rng(5);
  const auto t = oracle::random_tt(3, 3, 2, rng);
  const auto batch = sample(t, 50000, 17);
  EXPECT_LT(total_variation(t, batch), 0.02);
  EXPECT_EQ(batch.uniform_fallbacks, 0u);
}

TEST(Sampler, LogWeightsAreLogEval) {
  const auto t = init_random(6, 5, 3, 2);
  const auto batch = sample(t, 50, 3);
  ASSERT_EQ(batch.log_weights.size(), 50u);
  for (std::size_t l = 0; l < 50; ++l) {
    EXPECT_NEAR(batch.log_weights[l], log_eval(t, batch.indices[l]), 1e-10);
  }
}

TEST(Sampler, DeterministicUnderSeed) {
  const auto t = init_random(10, 16, 4, 1);
  EXPECT_EQ(sample(t, 30, 99).indices, sample(t, 30, 99).indices);
  EXPECT_NE(sample(t, 30, 99).indices, sample(t, 30, 100).indices);
}

TEST(Sampler, SamplesStayInRange) {
  const std::vector<std::size_t> dims{2, 7, 3, 11};
  const auto t = init_random(dims, 3, 8);
  for (const auto& n : sample(t, 500, 4).indices) {
    ASSERT_EQ(n.size(), dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) EXPECT_LT(n[i], dims[i]);
  }
}

TEST(Sampler, ZeroProbabilityIndicesAreNeverDrawn) {
  // Rank-1 product distribution with forbidden modes in every core.
  std::vector<TTCore> cores;
  for (int i = 0; i < 4; ++i) {
    TTCore c(1, 5, 1, 1.0);
    c.data[0] = 0.0;
    c.data[3] = 0.0;
    cores.push_back(c);
  }
  const TTDistribution t(std::move(cores));
  for (const auto& n : sample(t, 2000, 6).indices) {
    for (std::size_t m : n) {
      EXPECT_NE(m, 0u);
      EXPECT_NE(m, 3u);
    }
  }
}

TEST(Sampler, PointMassIsAlwaysDrawn) {
  std::vector<TTCore> cores;
  for (std::size_t i = 0; i < 3; ++i) {
    TTCore c(1, 4, 1, 0.0);
    c.data[i + 1] = 2.5;
    cores.push_back(c);
  }
  const TTDistribution t(std::move(cores));
  for (const auto& n : sample(t, 100, 1).indices) EXPECT_EQ(n, (MultiIndex{1, 2, 3}));
}

TEST(Sampler, HundredModesDoNotOverflow) {
  const auto t = init_random(100, 64, 5, 3);
  const auto batch = sample(t, 20, 1);
  for (double w : batch.log_weights) EXPECT_TRUE(std::isfinite(w));
}

TEST(Sampler, RejectsEmptyBatch) {
  EXPECT_THROW(sample(init_random(2, 2, 1, 0), 0, 0), std::invalid_argument);
}

TEST(Categorical, InverseCdfBoundaries) {
  const std::vector<double> w{1.0, 0.0, 3.0};
  EXPECT_EQ(categorical_inverse_cdf(w, 0.0), 0u);
  EXPECT_EQ(categorical_inverse_cdf(w, 0.2499), 0u);
  EXPECT_EQ(categorical_inverse_cdf(w, 0.25), 2u);
  EXPECT_EQ(categorical_inverse_cdf(w, 0.999999), 2u);
  // u = 1 is outside [0, 1) but still lands on a positive weight.
  EXPECT_EQ(categorical_inverse_cdf(w, 1.0), 2u);
}

TEST(Categorical, SkipsLeadingAndTrailingZeros) {
  const std::vector<double> w{0.0, 0.0, 2.0, 0.0};
  for (double u : {0.0, 0.3, 0.7, 0.9999999999}) EXPECT_EQ(categorical_inverse_cdf(w, u), 2u);
}

TEST(Categorical, RejectsDegenerateWeights) {
  EXPECT_THROW(categorical_inverse_cdf({}, 0.5), std::invalid_argument);
  EXPECT_THROW(categorical_inverse_cdf({0.0, 0.0}, 0.5), std::invalid_argument);
}

TEST(Categorical, FrequenciesFollowWeights) {
  const std::vector<double> w{0.1, 0.6, 0.3};
  std::vector<int> hits(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hits[categorical_inverse_cdf(w, (i + 0.5) / n)];
  EXPECT_NEAR(hits[0], 0.1 * n, 2);
  EXPECT_NEAR(hits[1], 0.6 * n, 2);
  EXPECT_NEAR(hits[2], 0.3 * n, 2);
}

}  // namespace
