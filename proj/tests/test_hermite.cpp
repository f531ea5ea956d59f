#include <gtest/gtest.h>

#include "hyperfinite/hermite.hpp"
#include "oracles.hpp"

using namespace hyperfinite;

TEST(HermiteFunctions, MatchBoostPolynomials) {
  for (double x : {-7.5, -3.0, -1.0, -0.2, 0.0, 0.4, 1.7, 5.0, 9.0}) {
    const auto v = hermite::functions(x, 41);
    for (unsigned n = 0; n <= 40; ++n) {
      const double ref = oracle::phi(n, x);
      ASSERT_NEAR(v[n], ref, 1e-13 * std::max(1.0, std::abs(ref))) << "n=" << n << " x=" << x;
    }
  }
}

TEST(HermiteFunctions, NoOverflowFarOut) {
  const auto v = hermite::functions(60.0, 3000);
  for (double e : v) ASSERT_TRUE(std::isfinite(e));
  // phi_n peaks near sqrt(2n+1); at x=60 the n ~ 1800 functions are O(0.1)
  double peak = 0.0;
  for (double e : v) peak = std::max(peak, std::abs(e));
  EXPECT_GT(peak, 1e-3);
  EXPECT_LT(peak, 1.0);
}

TEST(GaussHermite, NodesAreHermiteRoots) {
  for (unsigned n : {1u, 2u, 3u, 7u, 12u, 20u}) {
    const auto rule = hermite::gauss_rule(n);
    const auto roots = oracle::hermite_roots(n);
    ASSERT_EQ(roots.size(), n);
    for (unsigned k = 0; k < n; ++k) EXPECT_NEAR(rule.nodes[k], roots[k], 1e-12) << n << " " << k;
  }
}

TEST(GaussHermite, IntegratesPolynomialsExactly) {
  const auto rule = hermite::gauss_rule(10);
  // int x^{2k} e^{-x^2} dx = Gamma(k + 1/2)
  for (int k = 0; k <= 9; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      s += rule.scaled_weights[i] * std::exp(-x * x) * std::pow(x, 2 * k);
    }
    EXPECT_NEAR(s, std::tgamma(k + 0.5), 1e-12 * std::tgamma(k + 0.5)) << k;
  }
}

TEST(GaussHermite, RejectsZeroOrder) { EXPECT_THROW(hermite::gauss_rule(0), ConfigError); }
