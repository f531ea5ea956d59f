#include <gtest/gtest.h>

#include <bit>

#include "hyperfinite/everett/frequency.hpp"
#include "oracles.hpp"

using namespace hyperfinite;
using namespace hyperfinite::everett;

namespace {

/// |i/K - a/100| < b/100 in integers: |100 i - a K| < b K
bool in_window(long long i, long long K, long long a_pct, long long b_pct) { return std::llabs(100 * i - a_pct * K) < b_pct * K; }

}  // namespace

TEST(FrequencyLaw, Examples) {
  EXPECT_NEAR(frequency_law_measure(4, 0.5, 0.3).measure, 0.875, 1e-15);
  EXPECT_EQ(frequency_law_measure(1, 1.0, 0.01).measure, 1.0);
  EXPECT_EQ(frequency_law_measure(1, 1.0, 1.0).measure, 1.0);
  const auto r = frequency_law_measure(10000, 0.36, 0.02);
  EXPECT_GE(r.measure, 0.9999);
  EXPECT_NEAR(r.measure, oracle::kFrequencyK1e4, 1e-9);
  EXPECT_EQ(r.i_min, 3401);
  EXPECT_EQ(r.i_max, 3799);
  EXPECT_EQ(r.method, FrequencyMethod::exact_binomial);
}

TEST(FrequencyLaw, StrictWindowExcludesBoundary) {
  // K=10, p=0.5, eps=0.3: i=2 and i=8 sit exactly on the boundary
  const auto w = frequency_window(10, 0.5, 0.3);
  EXPECT_EQ(w.lo, 3);
  EXPECT_EQ(w.hi, 7);
  const auto v = frequency_window(100, 0.36, 0.02);
  EXPECT_EQ(v.lo, 35);
  EXPECT_EQ(v.hi, 37);
}

TEST(FrequencyLaw, RecordedValues) {
  EXPECT_NEAR(frequency_law_measure(100, 0.36, 0.02).measure, oracle::kFrequencyK100, 1e-12);
  EXPECT_NEAR(frequency_law_measure(1000, 0.36, 0.02).measure, oracle::kFrequencyK1000, 1e-11);
  EXPECT_NEAR(frequency_law_measure(12, 0.36, 0.1).measure, 0.44464006695111590, 1e-14);
}

TEST(FrequencyLaw, MeasureOneLimit) {
  double prev = 0.0;
  for (long long K : {100LL, 1000LL, 10000LL, 100000LL}) {
    const double m = frequency_law_measure(K, 0.36, 0.02).measure;
    EXPECT_GE(m, prev) << K;
    prev = m;
  }
  EXPECT_GT(prev, 1.0 - 1e-3);
}

TEST(FrequencyLaw, InvalidArguments) {
  EXPECT_THROW(frequency_law_measure(0, 0.5, 0.1), ConfigError);
  EXPECT_THROW(frequency_law_measure(10, 0.0, 0.1), ConfigError);
  EXPECT_THROW(frequency_law_measure(10, 1.5, 0.1), ConfigError);
  EXPECT_THROW(frequency_law_measure(10, 0.5, 0.0), ConfigError);
  EXPECT_THROW(frequency_law_measure(10, 0.5, 2.0), ConfigError);
  EXPECT_THROW(frequency_law_measure(10, std::nan(""), 0.1), ConfigError);
}

TEST(FrequencyLaw, HugeKStaysFinite) {
  const auto r = frequency_law_measure(100000000, 0.36, 0.001);
  EXPECT_TRUE(std::isfinite(r.measure));
  EXPECT_GT(r.measure, 0.999);
}

TEST(BruteForce, Examples) {
  EXPECT_NEAR(brute_force_branch_measure(2, 0.36, [](std::uint32_t x, int) { return std::popcount(x) == 1; }), 0.4608, 1e-15);
  EXPECT_NEAR(brute_force_branch_measure(20, 0.36, [](std::uint32_t, int) { return true; }), 1.0, 1e-12);
  EXPECT_NEAR(brute_force_branch_measure(
                  12, 0.36, [](std::uint32_t x, int K) { return in_window(std::popcount(x), K, 36, 10); }),
              frequency_law_measure(12, 0.36, 0.1).measure, 1e-12);
}

TEST(BruteForce, KCap) {
  EXPECT_THROW(brute_force_branch_measure(21, 0.5, [](std::uint32_t, int) { return true; }), ConfigError);
  EXPECT_THROW(brute_force_branch_measure(0, 0.5, [](std::uint32_t, int) { return true; }), ConfigError);
}

TEST(BruteForce, OracleEquivalenceGrid) {
  const std::pair<double, long long> ps[] = {{0.1, 10}, {0.36, 36}, {0.5, 50}, {0.9, 90}};
  const std::pair<double, long long> es[] = {{0.05, 5}, {0.1, 10}, {0.3, 30}};
  for (int K = 1; K <= kBruteForceMaxK; ++K)
    for (auto [p, pp] : ps)
      for (auto [e, ep] : es) {
        const double brute = brute_force_branch_measure(
            K, p, [&](std::uint32_t x, int k) { return in_window(std::popcount(x), k, pp, ep); });
        const double exact = frequency_law_measure(K, p, e).measure;
        ASSERT_NEAR(exact, brute, 1e-12) << "K=" << K << " p=" << p << " eps=" << e;
        ASSERT_NEAR(brute_force_frequency_law(K, p, e).measure, brute, 1e-15);
      }
}

TEST(DecimalValue, ShortestRoundTrip) {
  EXPECT_EQ(decimal_value(0.36), ExactRational(36, 100));
  EXPECT_EQ(decimal_value(0.3), ExactRational(3, 10));
  EXPECT_EQ(decimal_value(-2.5e-7), ExactRational(-25, 100000000));
  EXPECT_EQ(decimal_value(1e21), ExactRational(boost::multiprecision::cpp_int("1000000000000000000000")));
  EXPECT_THROW(decimal_value(INFINITY), ConfigError);
}
