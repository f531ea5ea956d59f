#pragma once

// A fixed battery of four classical randomness tests for a bit sequence under
// a Bernoulli(p) null. This is a finite, computable stand-in for "every
// standard criterion of randomness"; passing it says nothing about
// algorithmic randomness.

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/everett/sampling.hpp"

namespace hyperfinite::everett {

inline constexpr std::size_t kMinBatteryLength = 100;
inline constexpr std::size_t kBlockFrequencyLength = 32;
inline constexpr unsigned kEntropyBlockBits = 4;

struct TestResult {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = true;
};

struct RandomnessReport {
  std::size_t length = 0;
  double p = 0.5;
  double significance = 0.01;
  std::vector<TestResult> tests;
  double entropy_rate = 0.0;   // bits per symbol, from 4-bit block frequencies
  double model_entropy = 0.0;  // H(p)
  bool all_pass() const {
    for (const auto& t : tests)
      if (!t.pass) return false;
    return true;
  }
};

namespace detail {

inline double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

inline double chi2_upper(double df, double x) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

}  // namespace detail

/// Ones count against Bernoulli(p).
inline TestResult monobit_test(const OutcomeSequence& s, double p) {
  const double n = static_cast<double>(s.size());
  const double z = (static_cast<double>(count_ones(s)) - n * p) / std::sqrt(n * p * (1.0 - p));
  return {"monobit", z, detail::normal_two_sided(z), true};
}

/// Number of adjacent unequal pairs. Under the null each pair differs with
/// q = 2p(1-p) and neighbouring indicators have covariance p(1-p) - q^2.
inline TestResult runs_test(const OutcomeSequence& s, double p) {
  const double n = static_cast<double>(s.size());
  std::size_t t = 0;
  for (std::size_t j = 1; j < s.size(); ++j) t += s[j] != s[j - 1];
  const double q = 2.0 * p * (1.0 - p);
  const double mean = (n - 1.0) * q;
  const double var = (n - 1.0) * q * (1.0 - q) + 2.0 * (n - 2.0) * (p * (1.0 - p) - q * q);
  const double z = (static_cast<double>(t) - mean) / std::sqrt(var);
  return {"runs", z, detail::normal_two_sided(z), true};
}

/// Chi-square of ones counts in consecutive 32-bit blocks; a partial last block is dropped.
inline TestResult block_frequency_test(const OutcomeSequence& s, double p) {
  const std::size_t m = kBlockFrequencyLength, nb = s.size() / m;
  const double mean = static_cast<double>(m) * p, var = static_cast<double>(m) * p * (1.0 - p);
  double chi2 = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t ones = 0;
    for (std::size_t j = b * m; j < (b + 1) * m; ++j) ones += s[j];
    const double d = static_cast<double>(ones) - mean;
    chi2 += d * d / var;
  }
  return {"block-frequency", chi2, detail::chi2_upper(static_cast<double>(nb), chi2), true};
}

/// Compression proxy. The G statistic of non-overlapping 4-bit block counts
/// equals 2 m ln2 times the excess code length (in bits per block) of coding the
/// sequence with the Bernoulli(p) model instead of its own empirical block
/// distribution, so a sequence that compresses below H(p) is rejected.
inline TestResult entropy_test(const OutcomeSequence& s, double p, double* entropy_rate = nullptr) {
  constexpr std::size_t cells = std::size_t{1} << kEntropyBlockBits;
  const std::size_t m = s.size() / kEntropyBlockBits;
  std::array<std::size_t, cells> counts{};
  for (std::size_t b = 0; b < m; ++b) {
    unsigned v = 0;
    for (unsigned j = 0; j < kEntropyBlockBits; ++j) v |= s[b * kEntropyBlockBits + j] << j;
    ++counts[v];
  }
  double g = 0.0, h = 0.0;
  for (std::size_t v = 0; v < cells; ++v) {
    if (counts[v] == 0) continue;
    const int ones = std::popcount(static_cast<unsigned>(v));
    const double expected = static_cast<double>(m) * std::pow(p, ones) *
                            std::pow(1.0 - p, static_cast<int>(kEntropyBlockBits) - ones);
    const double c = static_cast<double>(counts[v]);
    g += 2.0 * c * std::log(c / expected);
    const double f = c / static_cast<double>(m);
    h -= f * std::log2(f);
  }
  if (entropy_rate) *entropy_rate = h / kEntropyBlockBits;
  return {"entropy", g, detail::chi2_upper(static_cast<double>(cells - 1), g), true};
}

inline RandomnessReport randomness_battery(const OutcomeSequence& s, double p, double significance) {
  if (s.size() < kMinBatteryLength)
    throw ConfigError("randomness battery needs at least " + std::to_string(kMinBatteryLength) + " bits, got " +
                      std::to_string(s.size()));
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("randomness battery needs p in (0, 1), got " + std::to_string(p));
  if (!(significance > 0.0 && significance < 1.0))
    throw ConfigError("significance must lie in (0, 1), got " + std::to_string(significance));
  for (auto b : s)
    if (b > 1u) throw ConfigError("randomness battery expects a 0/1 sequence");

  RandomnessReport r;
  r.length = s.size();
  r.p = p;
  r.significance = significance;
  r.model_entropy = detail::binary_entropy(p);
  r.tests.push_back(monobit_test(s, p));
  r.tests.push_back(runs_test(s, p));
  r.tests.push_back(block_frequency_test(s, p));
  r.tests.push_back(entropy_test(s, p, &r.entropy_rate));
  for (auto& t : r.tests) t.pass = t.p_value >= significance;
  return r;
}

/// Degenerate sequences the battery must reject.
namespace counterexample {

inline OutcomeSequence all_zeros(std::size_t n) { return OutcomeSequence(n, 0u); }
inline OutcomeSequence all_ones(std::size_t n) { return OutcomeSequence(n, 1u); }
inline OutcomeSequence alternating(std::size_t n) {
  OutcomeSequence s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<std::uint32_t>(j & 1u);
  return s;
}
/// `period` zeros then `period` ones, repeated.
inline OutcomeSequence periodic_blocks(std::size_t n, std::size_t period) {
  if (period == 0) throw ConfigError("period must be positive");
  OutcomeSequence s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<std::uint32_t>((j / period) & 1u);
  return s;
}

}  // namespace counterexample

}  // namespace hyperfinite::everett
