#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "hyperfinite/everett/sampling.hpp"

using namespace hyperfinite;
using namespace hyperfinite::everett;

namespace {

// ones among 100 x 10^4 Bernoulli(0.36) draws, seed 20261014
constexpr std::size_t kPooledOnesRegression = 360023;

std::shared_ptr<const BranchDecomposition> position_branches(const StatePreset& p, long long n) {
  const auto s = hermite_space(n);
  auto spec = std::make_shared<const SpectralDecomposition>(diagonalize(natural_extension(ObservableKind::position, s, std::nullopt)));
  return std::make_shared<const BranchDecomposition>(decompose(embed_state(p, s).state, spec));
}

}  // namespace

TEST(Sampling, ZeroProbabilityGivesZeros) {
  const auto seqs = sample_branches({10, BernoulliModel{0.0}}, 5, 1);
  for (const auto& s : seqs) EXPECT_EQ(s, OutcomeSequence(10, 0u));
  const auto ones = sample_branches({10, BernoulliModel{1.0}}, 5, 1);
  for (const auto& s : ones) EXPECT_EQ(s, OutcomeSequence(10, 1u));
}

TEST(Sampling, PooledCountConcentrates) {
  const auto seqs = sample_branches({10000, BernoulliModel{0.36}}, 100, 20261014);
  std::size_t ones = 0;
  for (const auto& s : seqs) ones += count_ones(s);
  const double n = 1e6, sd = std::sqrt(n * 0.36 * 0.64);
  EXPECT_LT(std::abs(static_cast<double>(ones) - 0.36 * n), 5.0 * sd);
  EXPECT_EQ(ones, kPooledOnesRegression);
}

TEST(Sampling, ReproducibleAndThreadIndependent) {
  const RepeatedExperiment ex{5000, BernoulliModel{0.3}};
  const auto a = sample_branches(ex, 16, 99, 1);
  const auto b = sample_branches(ex, 16, 99, 1);
  const auto c = sample_branches(ex, 16, 99, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a, sample_branches(ex, 16, 100, 1));
  // sequence j does not depend on how many sequences are drawn
  EXPECT_EQ(sample_branches(ex, 3, 99, 1)[2], a[2]);
}

TEST(Sampling, PointMassIsConstant) {
  const auto s = hermite_space(24);
  auto spec = std::make_shared<const SpectralDecomposition>(diagonalize(natural_extension(ObservableKind::position, s, std::nullopt)));
  for (Eigen::Index k : {0, 7, 23}) {
    auto bd = std::make_shared<const BranchDecomposition>(decompose(spec->eigenvector(k), spec));
    for (const auto& seq : sample_branches({2000, OutcomeModel{bd}}, 3, 5))
      for (auto v : seq) ASSERT_EQ(v, static_cast<std::uint32_t>(k));
  }
}

TEST(Sampling, CategoricalFrequenciesMatchWeights) {
  const auto bd = position_branches(preset::HoEigenstate{0}, 16);
  const auto seqs = sample_branches({200000, OutcomeModel{bd}}, 1, 8);
  std::vector<double> counts(16, 0.0);
  for (auto v : seqs[0]) counts[v] += 1.0;
  double chi2 = 0.0;
  int cells = 0;
  for (const auto& w : bd->worlds()) {
    const double e = w.weight * 200000.0;
    if (e < 5.0) continue;
    chi2 += (counts[w.index] - e) * (counts[w.index] - e) / e;
    ++cells;
  }
  const boost::math::chi_squared chi(cells - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(chi, chi2)), 1e-3);
}

TEST(Sampling, OneCountsFollowBinomial) {
  // 10^4 sequences of length 100 against Binomial(100, 0.36), cells pooled to expected >= 5
  const auto seqs = sample_branches({100, BernoulliModel{0.36}}, 10000, 31337);
  std::vector<double> hist(101, 0.0);
  for (const auto& s : seqs) hist[count_ones(s)] += 1.0;
  const boost::math::binomial bin(100, 0.36);
  double chi2 = 0.0, obs = 0.0, exp = 0.0;
  int cells = 0;
  for (int i = 0; i <= 100; ++i) {
    obs += hist[i];
    exp += 10000.0 * boost::math::pdf(bin, i);
    const double rest = 10000.0 * boost::math::cdf(boost::math::complement(bin, i));
    if (exp >= 5.0 && rest >= 5.0) {
      chi2 += (obs - exp) * (obs - exp) / exp;
      ++cells;
      obs = exp = 0.0;
    }
  }
  if (exp > 0.0) {
    chi2 += (obs - exp) * (obs - exp) / exp;
    ++cells;
  }
  const boost::math::chi_squared chi(cells - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(chi, chi2)), 1e-3);
}

TEST(Sampling, Validation) {
  EXPECT_THROW(sample_branches({0, BernoulliModel{0.5}}, 1, 1), ConfigError);
  EXPECT_THROW(sample_branches({10, BernoulliModel{1.5}}, 1, 1), ConfigError);
  EXPECT_THROW(sample_branches({10, BernoulliModel{0.5}}, 0, 1), ConfigError);
  EXPECT_THROW(sample_branches({10, OutcomeModel{std::shared_ptr<const BranchDecomposition>{}}}, 1, 1), ConfigError);
}

TEST(Sampling, UniformRange) {
  auto g = sequence_generator(1, 2);
  for (int k = 0; k < 100000; ++k) {
    const double u = uniform01(g);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
