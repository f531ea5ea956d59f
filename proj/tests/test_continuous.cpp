#include <gtest/gtest.h>

#include "hyperfinite/everett/continuous.hpp"
#include "hyperfinite/everett/frequency.hpp"
#include "oracles.hpp"

using namespace hyperfinite;
using namespace hyperfinite::everett;

namespace {

std::shared_ptr<const SpectralDecomposition> position(long long n) {
  return std::make_shared<const SpectralDecomposition>(
      diagonalize(natural_extension(ObservableKind::position, hermite_space(n), std::nullopt)));
}

}  // namespace

TEST(ContinuousLaw, GroundStateUnitInterval) {
  const auto rep = continuous_frequency_law(preset::HoEigenstate{0}, hermite_space(256), ObservableKind::position,
                                            std::nullopt, 100000, {{-1.0, 1.0}}, 0.0, 20, 7);
  ASSERT_EQ(rep.rows.size(), 1u);
  const auto& row = rep.rows[0];
  EXPECT_NEAR(row.analytic, oracle::kErf1, 1e-15);
  EXPECT_EQ(row.empirical.size(), 20u);
  EXPECT_LE(row.max_deviation, 0.02);
  // branch bias plus a DKW band for 20 samples at confidence 1 - 1e-6
  const double dkw = std::sqrt(std::log(2.0 * 20 / 1e-6) / (2.0 * 100000));
  EXPECT_LE(row.max_deviation, std::abs(row.branch - row.analytic) + dkw);
}

TEST(ContinuousLaw, PointMass) {
  const auto spec = position(32);
  const double lam = spec->eigenvalue(9);
  auto bd = std::make_shared<const BranchDecomposition>(decompose(spec->eigenvector(9), spec));
  const std::vector<Interval> family = {{lam - 0.01, lam + 0.01}, {lam + 0.1, 5.0}, {-5.0, lam}};
  const auto rep = continuous_frequency_law(bd, discrete_measure(*bd, "point"), 5000, family, 0.0, 4, 3);
  for (double e : rep.rows[0].empirical) EXPECT_EQ(e, 1.0);
  for (double e : rep.rows[1].empirical) EXPECT_EQ(e, 0.0);
  for (double e : rep.rows[2].empirical) EXPECT_EQ(e, 1.0);
  EXPECT_LE(rep.max_deviation, 1e-20);
}

TEST(ContinuousLaw, SweepReadsPrefixes) {
  const auto spec = position(64);
  auto bd = std::make_shared<const BranchDecomposition>(decompose(embed_state(preset::HoEigenstate{0}, hermite_space(64)).state, spec));
  const auto mu = position_measure(preset::HoEigenstate{0});
  const auto sweep = continuous_law_sweep(bd, mu, {1000, 10000}, {{-1.0, 1.0}}, 0.0, 5, 11);
  const auto small = continuous_frequency_law(bd, mu, 1000, {{-1.0, 1.0}}, 0.0, 5, 11);
  ASSERT_EQ(sweep.size(), 2u);
  EXPECT_EQ(sweep[0].rows[0].empirical, small.rows[0].empirical);
  EXPECT_EQ(sweep[1].K, 10000);
}

TEST(ContinuousLaw, SpinConsistency) {
  // the fraction of sampled sequences whose "up" frequency is within eps of
  // 0.36 estimates the exact frequency-law measure
  auto bd = std::make_shared<const BranchDecomposition>(spin_measurement_preset(0.6, 0.8));
  const int samples = 4000;
  const long long K = 100;
  const auto rep = continuous_frequency_law(bd, discrete_measure(*bd, "spin"), K, {{0.5, 1.5}}, 0.0, samples, 21);
  EXPECT_NEAR(rep.rows[0].analytic, 0.36, 1e-12);
  int inside = 0;
  for (double e : rep.rows[0].empirical) {
    const long long hits = std::llround(e * static_cast<double>(K));
    inside += std::llabs(hits - 36) < 2;
  }
  const double exact = frequency_law_measure(K, 0.36, 0.02).measure;
  const double frac = static_cast<double>(inside) / samples;
  EXPECT_NEAR(frac, exact, 4.0 * std::sqrt(exact * (1.0 - exact) / samples));
}

TEST(ContinuousLaw, Unsupported) {
  EXPECT_THROW(continuous_frequency_law(preset::HoEigenstate{0}, hermite_space(8), ObservableKind::momentum, std::nullopt,
                                        1000, {{-1.0, 1.0}}, 0.0, 2, 1),
               ConfigError);
  EXPECT_THROW(continuous_frequency_law(preset::Custom{std::vector<Complex>(8, 0.35)}, hermite_space(8),
                                        ObservableKind::position, std::nullopt, 1000, {{-1.0, 1.0}}, 0.0, 2, 1),
               ConfigError);
}

TEST(ContinuousLaw, Median) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}
