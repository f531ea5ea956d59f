#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "hyperfinite/dynamics.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace hyperfinite;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> time_grid(double step, double end) {
  std::vector<double> t;
  for (int k = 0; k * step <= end + 1e-12; ++k) t.push_back(k * step);
  return t;
}

using gen::anharmonic;
using gen::random_state;

}  // namespace

TEST(Evolve, IdentityAtZero) {
  const auto s = hermite_space(20);
  std::mt19937_64 g(1);
  const auto phi = random_state(g, s);
  const auto h = anharmonic(s);
  EXPECT_EQ(evolve(phi, *h, 0.0).coefficients(), phi.coefficients());
}

TEST(Evolve, GroundStatePhase) {
  const auto s = hermite_space(16);
  const auto h = diagonalize(oscillator_hamiltonian(s));
  const auto phi0 = StateVector::basis(s, 0);
  const auto out = evolve(phi0, h, pi);
  EXPECT_NEAR(std::abs(out.coefficients()[0] - std::polar(1.0, -pi / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(phi0, out)), 1.0, 1e-10);
}

TEST(Evolve, InverseTime) {
  const auto s = hermite_space(24);
  std::mt19937_64 g(2);
  const auto phi = random_state(g, s);
  const auto h = anharmonic(s);
  const auto back = evolve(evolve(phi, *h, 1.3), *h, -1.3);
  EXPECT_LE((back.coefficients() - phi.coefficients()).norm(), 1e-9);
}

TEST(Evolve, SpaceMismatch) {
  const auto h = diagonalize(oscillator_hamiltonian(hermite_space(4)));
  EXPECT_THROW(evolve(StateVector::basis(hermite_space(5), 0), h, 1.0), UsageError);
}

TEST(DynamicsProperties, UnitarityGroupLawEnergy) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> t(-20.0, 20.0);
  for (const auto& s : {hermite_space(32), grid_space(32, 12.0)}) {
    const auto h = anharmonic(s);
    for (int k = 0; k < 50; ++k) {
      const auto phi = random_state(g, s);
      const double t1 = t(g), t2 = t(g);
      const auto a = evolve(phi, *h, t1);
      ASSERT_NEAR(a.norm(), phi.norm(), 1e-10);
      const auto ab = evolve(a, *h, t2);
      const auto direct = evolve(phi, *h, t1 + t2);
      ASSERT_LE((ab.coefficients() - direct.coefficients()).norm(), 1e-9);
      const double e0 = h->source().expectation(phi);
      ASSERT_NEAR(h->source().expectation(a), e0, 1e-9 * std::max(1.0, std::abs(e0)));
      ASSERT_NEAR(h->source().expectation(ab), e0, 1e-9 * std::max(1.0, std::abs(e0)));
    }
  }
}

TEST(DynamicsProperties, PropagatorComposition) {
  const auto s = hermite_space(20);
  const auto h = anharmonic(s);
  std::mt19937_64 g(4);
  const Propagator p1(h, 0.7), p2(h, -2.1);
  const auto phi = random_state(g, s);
  const auto composed = p1.then(p2).apply(phi);
  const auto sequential = p2.apply(p1.apply(phi));
  EXPECT_LE((composed.coefficients() - sequential.coefficients()).norm(), 1e-9);
  EXPECT_DOUBLE_EQ(p1.then(p2).time(), 0.7 - 2.1);
  const Propagator other(anharmonic(s), 1.0);
  EXPECT_THROW(p1.then(other), UsageError);
}

TEST(ReferenceEvolution, CoherentAtZeroIsEmbedding) {
  const auto s = hermite_space(32);
  EXPECT_EQ(reference_evolution(preset::Coherent{1.0}, 0.0, s).state.coefficients(),
            embed_state(preset::Coherent{1.0}, s).state.coefficients());
}

TEST(ReferenceEvolution, CoherentFullPeriod) {
  const auto s = hermite_space(40);
  const auto r = reference_evolution(preset::Coherent{1.0}, 2.0 * pi, s);
  // independent closed form: |z e^{-it}> e^{-it/2} at t = 2 pi is -|z>
  Eigen::VectorXcd ref(40);
  for (int n = 0; n < 40; ++n)
    ref[n] = -std::exp(-0.5) / std::sqrt(std::tgamma(n + 1.0)) / std::sqrt(1.0 - r.tail_weight);
  EXPECT_LE((r.state.coefficients() - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ReferenceEvolution, CoherentRotates) {
  const auto s = hermite_space(48);
  const double t = 0.9;
  const auto r = reference_evolution(preset::Coherent{1.0}, t, s);
  const auto z = std::polar(1.0, -t);
  const double kept = std::sqrt(1.0 - r.tail_weight);
  for (int n = 0; n < 48; ++n) {
    const Complex ref = std::polar(1.0, -t / 2) * std::exp(-0.5) * std::pow(z, n) / std::sqrt(std::tgamma(n + 1.0));
    ASSERT_NEAR(std::abs(r.state.coefficients()[n] * kept - ref), 0.0, 1e-14) << n;
  }
}

TEST(ReferenceEvolution, FirstExcitedPhase) {
  const auto s = hermite_space(8);
  const auto r = reference_evolution(preset::HoEigenstate{1}, pi, s);
  EXPECT_NEAR(std::abs(r.state.coefficients()[1] - std::polar(1.0, -1.5 * pi)), 0.0, 1e-15);
}

TEST(DynamicsDeviation, EigenstateIsExact) {
  for (long long n : {4, 16, 64}) {
    const auto r = dynamics_deviation(preset::HoEigenstate{2}, hermite_space(n), time_grid(0.5, 10.0));
    EXPECT_LE(r.max_deviation, 1e-10);
    EXPECT_EQ(r.dim, static_cast<std::size_t>(n));
    EXPECT_EQ(r.initial_residual, 0.0);
  }
}

TEST(DynamicsDeviation, CoherentN128) {
  const auto r = dynamics_deviation(preset::Coherent{1.0}, hermite_space(128), time_grid(0.5, 10.0));
  EXPECT_LE(r.max_deviation, 1e-6);
  for (double d : r.deviations) EXPECT_GE(d, 0.0);
}

TEST(DynamicsDeviation, CoherentStrictlyDecreasing) {
  const long long dims[] = {16, 32, 64, 128};
  double prev = 1e9;
  for (int k = 0; k < 4; ++k) {
    const auto r = dynamics_deviation(preset::Coherent{1.0}, hermite_space(dims[k]), time_grid(0.5, 10.0));
    EXPECT_LT(r.max_deviation, prev);
    // the L2 deviation is at least the part of U_t phi outside the space
    EXPECT_GE(r.max_deviation, std::sqrt(oracle::kCoherentTail[k + 1]) * (1 - 1e-12));
    prev = r.max_deviation;
  }
}

TEST(DynamicsDeviation, GridFamilyTrend) {
  double prev = 1e9;
  for (long long n : {32, 64, 128}) {
    const auto r = dynamics_deviation(preset::Coherent{0.5}, grid_space(n, 14.0), time_grid(0.5, 3.0));
    EXPECT_LT(r.max_deviation, prev) << n;
    prev = r.max_deviation;
  }
}

TEST(DynamicsDeviation, UnsortedGrid) {
  EXPECT_THROW(dynamics_deviation(preset::Coherent{1.0}, hermite_space(8), {1.0, 0.0}), ConfigError);
}
