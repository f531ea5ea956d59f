#pragma once

// Measure of the branches of K repeated two-outcome measurements whose
// relative frequency i_x / K is within eps of p.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <system_error>
#include <vector>

#include "hyperfinite/errors.hpp"

namespace hyperfinite::everett {

enum class FrequencyMethod { exact_binomial, brute_force, sampled };

inline const char* to_string(FrequencyMethod m) {
  switch (m) {
    case FrequencyMethod::exact_binomial: return "exact-binomial";
    case FrequencyMethod::brute_force: return "brute-force";
    case FrequencyMethod::sampled: return "sampled";
  }
  return "?";
}

struct FrequencyLawReport {
  long long K = 0;
  double p = 0.0;
  double eps = 0.0;
  double measure = 0.0;
  FrequencyMethod method = FrequencyMethod::exact_binomial;
  long long i_min = 0;  // window of included counts; empty when i_min > i_max
  long long i_max = -1;
};

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

using ExactRational = boost::multiprecision::cpp_rational;

/// The decimal number a double prints as (shortest round-trip form), exactly.
/// p = 0.36 then means 36/100, not the nearest binary fraction.
inline ExactRational decimal_value(double x) {
  if (!std::isfinite(x)) throw ConfigError("non-finite parameter");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  if (res.ec != std::errc{}) throw NumericalError("cannot format parameter");
  const std::string s(buf, res.ptr);
  const auto e_pos = s.find('e');
  std::string mantissa = s.substr(0, e_pos);
  int exponent = std::stoi(s.substr(e_pos + 1));
  bool negative = false;
  if (!mantissa.empty() && mantissa[0] == '-') {
    negative = true;
    mantissa.erase(0, 1);
  }
  std::string digits;
  for (char c : mantissa)
    if (c != '.') digits.push_back(c);
  const auto dot = mantissa.find('.');
  if (dot != std::string::npos) exponent -= static_cast<int>(mantissa.size() - dot - 1);
  boost::multiprecision::cpp_int num(digits);
  boost::multiprecision::cpp_int ten_pow = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), std::abs(exponent));
  ExactRational r = exponent >= 0 ? ExactRational(num * ten_pow) : ExactRational(num, ten_pow);
  return negative ? ExactRational(-r) : r;
}

struct CountWindow {
  long long lo = 0;
  long long hi = -1;
};

/// { i in 0..K : |i/K - p| < eps }, with p and eps taken as decimals.
inline CountWindow frequency_window(long long K, double p, double eps) {
  using boost::multiprecision::cpp_int;
  const ExactRational kp = ExactRational(K) * decimal_value(p);
  const ExactRational ke = ExactRational(K) * decimal_value(eps);
  const ExactRational a = kp - ke, b = kp + ke;  // a < i < b
  auto floor_of = [](const ExactRational& r) {
    cpp_int q = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
    if (r < 0 && ExactRational(q) != r) q -= 1;
    return q;
  };
  const cpp_int fa = floor_of(a);
  cpp_int lo = fa + 1;
  cpp_int fb = floor_of(b);
  cpp_int hi = ExactRational(fb) == b ? cpp_int(fb - 1) : fb;
  if (lo < 0) lo = 0;
  if (hi > K) hi = K;
  return {lo.convert_to<long long>(), hi.convert_to<long long>()};
}

inline void check_frequency_args(long long K, double p, double eps) {
  if (K < 1) throw ConfigError("K must be >= 1, got " + std::to_string(K));
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1], got " + std::to_string(p));
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in (0, 1], got " + std::to_string(eps));
}

/// log( C(K,i) p^i (1-p)^(K-i) )
inline double log_binomial_term(long long K, long long i, double p) {
  const double k = static_cast<double>(K), x = static_cast<double>(i);
  double r = std::lgamma(k + 1.0) - std::lgamma(x + 1.0) - std::lgamma(k - x + 1.0);
  if (i > 0) r += x * std::log(p);
  if (K - i > 0) r += (k - x) * std::log1p(-p);
  return r;
}

/// Sum_{i : |i/K - p| < eps} C(K,i) p^i (1-p)^(K-i), summed in log space.
inline FrequencyLawReport frequency_law_measure(long long K, double p, double eps) {
  check_frequency_args(K, p, eps);
  const CountWindow w = frequency_window(K, p, eps);
  FrequencyLawReport r{K, p, eps, 0.0, FrequencyMethod::exact_binomial, w.lo, w.hi};
  CompensatedSum s;
  for (long long i = w.lo; i <= w.hi; ++i) {
    if (p == 1.0 && i != K) continue;
    s.add(std::exp(log_binomial_term(K, i, p)));
  }
  r.measure = std::clamp(s.value(), 0.0, 1.0);
  return r;
}

inline constexpr int kBruteForceMaxK = 20;

/// Branch x in 2^K: bit j of `bits` is the outcome of measurement j (1 = "up",
/// weight p). Exhaustive sum of p^(i_x) (1-p)^(K-i_x) over branches with predicate(x).
inline double brute_force_branch_measure(int K, double p, const std::function<bool(std::uint32_t bits, int K)>& predicate) {
  if (K < 1 || K > kBruteForceMaxK)
    throw ConfigError("brute-force enumeration needs 1 <= K <= " + std::to_string(kBruteForceMaxK) + ", got " +
                      std::to_string(K));
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  CompensatedSum s;
  const std::uint32_t n = std::uint32_t{1} << K;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (!predicate(x, K)) continue;
    double w = 1.0;
    for (int j = 0; j < K; ++j) w *= ((x >> j) & 1u) ? p : 1.0 - p;
    s.add(w);
  }
  return s.value();
}

/// Brute-force version of frequency_law_measure.
inline FrequencyLawReport brute_force_frequency_law(int K, double p, double eps) {
  check_frequency_args(K, p, eps);
  const CountWindow w = frequency_window(K, p, eps);
  FrequencyLawReport r{K, p, eps, 0.0, FrequencyMethod::brute_force, w.lo, w.hi};
  r.measure = brute_force_branch_measure(K, p, [&](std::uint32_t x, int) {
    const long long i = std::popcount(x);
    return w.lo <= i && i <= w.hi;
  });
  return r;
}

}  // namespace hyperfinite::everett
