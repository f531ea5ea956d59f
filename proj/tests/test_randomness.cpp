#include <gtest/gtest.h>

#include "hyperfinite/everett/randomness.hpp"

using namespace hyperfinite;
using namespace hyperfinite::everett;

TEST(Battery, AllZerosFailsMonobit) {
  const auto r = randomness_battery(counterexample::all_zeros(10000), 0.5, 0.01);
  EXPECT_EQ(r.tests[0].name, "monobit");
  EXPECT_LT(r.tests[0].p_value, 1e-10);
  EXPECT_FALSE(r.tests[0].pass);
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.entropy_rate, 0.0);
}

TEST(Battery, AlternatingFailsRuns) {
  const auto r = randomness_battery(counterexample::alternating(10000), 0.5, 0.01);
  EXPECT_EQ(r.tests[1].name, "runs");
  EXPECT_LT(r.tests[1].p_value, 1e-10);
  EXPECT_GT(r.tests[1].statistic, 0.0);  // far too many runs
  EXPECT_TRUE(r.tests[0].pass);         // balanced
  EXPECT_FALSE(r.all_pass());
}

TEST(Battery, PeriodicBlocksFail) {
  for (std::size_t period : {2u, 3u, 8u, 16u, 64u, 256u}) {
    const auto r = randomness_battery(counterexample::periodic_blocks(10000, period), 0.5, 0.01);
    EXPECT_FALSE(r.all_pass()) << period;
  }
  EXPECT_FALSE(randomness_battery(counterexample::all_ones(10000), 0.5, 0.01).all_pass());
}

TEST(Battery, BiasedNull) {
  // a fair-coin sequence is not random under a p=0.36 null
  const auto seq = sample_branches({10000, BernoulliModel{0.5}}, 1, 4)[0];
  EXPECT_FALSE(randomness_battery(seq, 0.36, 0.01).tests[0].pass);
  const auto biased = sample_branches({10000, BernoulliModel{0.36}}, 1, 4)[0];
  const auto r = randomness_battery(biased, 0.36, 0.01);
  EXPECT_NEAR(r.entropy_rate, r.model_entropy, 0.02);
}

TEST(Battery, CalibrationFairCoin) {
  const auto seqs = sample_branches({10000, BernoulliModel{0.5}}, 500, 20261014);
  std::array<int, 4> rejections{};
  for (const auto& s : seqs) {
    const auto r = randomness_battery(s, 0.5, 0.01);
    for (std::size_t t = 0; t < 4; ++t) {
      ASSERT_GE(r.tests[t].p_value, 0.0);
      ASSERT_LE(r.tests[t].p_value, 1.0);
      rejections[t] += !r.tests[t].pass;
    }
  }
  for (std::size_t t = 0; t < 4; ++t) {
    const double rate = rejections[t] / 500.0;
    EXPECT_GE(rate, 0.002) << t;
    EXPECT_LE(rate, 0.03) << t;
  }
}

TEST(Battery, Deterministic) {
  const auto s = sample_branches({4096, BernoulliModel{0.3}}, 1, 9)[0];
  const auto a = randomness_battery(s, 0.3, 0.05), b = randomness_battery(s, 0.3, 0.05);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(a.tests[t].statistic, b.tests[t].statistic);
    EXPECT_EQ(a.tests[t].p_value, b.tests[t].p_value);
  }
}

TEST(Battery, Validation) {
  EXPECT_THROW(randomness_battery(OutcomeSequence(99, 0u), 0.5, 0.01), ConfigError);
  EXPECT_THROW(randomness_battery(OutcomeSequence(200, 0u), 0.0, 0.01), ConfigError);
  EXPECT_THROW(randomness_battery(OutcomeSequence(200, 0u), 0.5, 1.0), ConfigError);
  EXPECT_THROW(randomness_battery(OutcomeSequence(200, 2u), 0.5, 0.01), ConfigError);
}

TEST(RunsTest, VarianceMatchesSimulation) {
  // empirical variance of the transition count over many short sequences
  const double p = 0.3;
  const auto seqs = sample_branches({200, BernoulliModel{p}}, 20000, 17);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& s : seqs) {
    const double z = runs_test(s, p).statistic;
    s1 += z;
    s2 += z * z;
  }
  const double mean = s1 / 20000.0, var = s2 / 20000.0 - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(var, 1.0, 0.05);
}
