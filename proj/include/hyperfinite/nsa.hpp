#pragma once

// Computable stand-in for the hyperreals: formal Laurent series in a single
// infinite element omega with exact rational coefficients,
//
//     x = sum_k c_k * omega^k      (finitely many nonzero c_k)
//
// ordered by the sign of the leading (highest-exponent) coefficient. This is a
// genuine ordered non-Archimedean field for add/mul/neg/compare; inverses are
// infinite series and are expanded to a fixed number of terms.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hyperfinite/errors.hpp"

namespace hyperfinite::nsa {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kDefaultInversionDepth = 16;

class AsymptoticScalar {
 public:
  /// Exponent -> coefficient, highest exponent first. Never holds a zero coefficient.
  using Terms = std::map<int, Rational, std::greater<>>;

  AsymptoticScalar() = default;
  AsymptoticScalar(const Rational& constant) {  // NOLINT(google-explicit-constructor)
    set(0, constant);
  }
  AsymptoticScalar(long long constant)  // NOLINT(google-explicit-constructor)
      : AsymptoticScalar(Rational(constant)) {}

  /// coefficient * omega^power
  static AsymptoticScalar omega(int power = 1, const Rational& coefficient = 1) {
    AsymptoticScalar r;
    r.set(power, coefficient);
    return r;
  }

  static AsymptoticScalar from_terms(const Terms& terms) {
    AsymptoticScalar r;
    for (const auto& [e, c] : terms) r.set(e, c);
    return r;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// True when this value (or an operand it was computed from) came out of a
  /// truncated series expansion.
  bool truncated() const { return truncated_; }

  /// Highest exponent present; requires a nonzero scalar.
  int leading_exponent() const {
    if (is_zero()) throw DomainError("leading exponent of zero");
    return terms_.begin()->first;
  }
  int lowest_exponent() const {
    if (is_zero()) throw DomainError("lowest exponent of zero");
    return terms_.rbegin()->first;
  }
  const Rational& leading_coefficient() const {
    if (is_zero()) throw DomainError("leading coefficient of zero");
    return terms_.begin()->second;
  }
  Rational coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  int sign() const {
    if (is_zero()) return 0;
    return leading_coefficient() > 0 ? 1 : -1;
  }

  AsymptoticScalar operator-() const {
    AsymptoticScalar r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  AsymptoticScalar& operator+=(const AsymptoticScalar& o) {
    for (const auto& [e, c] : o.terms_) add_to(e, c);
    truncated_ = truncated_ || o.truncated_;
    return *this;
  }
  AsymptoticScalar& operator-=(const AsymptoticScalar& o) { return *this += -o; }
  AsymptoticScalar& operator*=(const AsymptoticScalar& o) { return *this = *this * o; }

  friend AsymptoticScalar operator+(AsymptoticScalar a, const AsymptoticScalar& b) { return a += b; }
  friend AsymptoticScalar operator-(AsymptoticScalar a, const AsymptoticScalar& b) { return a -= b; }
  friend AsymptoticScalar operator*(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    AsymptoticScalar r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_to(ea + eb, ca * cb);
    r.truncated_ = a.truncated_ || b.truncated_;
    return r;
  }

  /// Equality ignores the truncation flag.
  friend bool operator==(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    return a.terms_ == b.terms_;
  }
  friend std::strong_ordering operator<=>(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    const int s = (a - b).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational mag = c < 0 ? Rational(-c) : c;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool unit = mag == 1;
      if (e == 0) {
        os << mag;
        continue;
      }
      if (!unit) os << mag << "*";
      os << "w";
      if (e != 1) os << "^" << e;
    }
    return os.str();
  }

 private:
  void set(int e, const Rational& c) {
    if (c != 0) terms_[e] = c;
  }
  void add_to(int e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
  bool truncated_ = false;

  friend AsymptoticScalar with_truncation(AsymptoticScalar x, bool flag) {
    x.truncated_ = x.truncated_ || flag;
    return x;
  }
};

/// Three-way comparison as a plain integer (-1, 0, +1).
inline int compare(const AsymptoticScalar& a, const AsymptoticScalar& b) { return (a - b).sign(); }

/// Multiplicative inverse, expanded to its `depth` highest-order terms.
///
/// With x = a_0 w^d + a_1 w^(d-1) + ..., the inverse is q_0 w^-d + q_1 w^(-d-1) + ...
/// where q_0 = 1/a_0 and q_j = -(1/a_0) sum_{i=1..j} a_i q_(j-i). The result is
/// flagged truncated unless x * inverse(x) == 1 exactly.
inline AsymptoticScalar inverse(const AsymptoticScalar& x,
                                std::size_t depth = kDefaultInversionDepth) {
  if (x.is_zero()) throw DomainError("inverse of zero");
  if (depth == 0) throw ConfigError("inversion depth must be positive");
  const int d = x.leading_exponent();
  const Rational a0 = x.leading_coefficient();

  std::map<std::size_t, Rational> lower;  // a_i for i >= 1, by offset below the leading exponent
  for (const auto& [e, c] : x.terms())
    if (e != d) lower.emplace(static_cast<std::size_t>(d - e), c);

  std::vector<Rational> q(depth);
  q[0] = 1 / a0;
  for (std::size_t j = 1; j < depth; ++j) {
    Rational acc = 0;
    for (const auto& [i, ai] : lower) {
      if (i > j) break;
      acc += ai * q[j - i];
    }
    q[j] = -acc / a0;
  }

  AsymptoticScalar::Terms terms;
  for (std::size_t j = 0; j < depth; ++j)
    if (q[j] != 0) terms.emplace(-d - static_cast<int>(j), q[j]);
  AsymptoticScalar inv = AsymptoticScalar::from_terms(terms);
  const bool exact = (x * inv) == AsymptoticScalar(1);
  return with_truncation(inv, !exact || x.truncated());
}

inline AsymptoticScalar divide(const AsymptoticScalar& num, const AsymptoticScalar& den,
                               std::size_t depth = kDefaultInversionDepth) {
  return num * inverse(den, depth);
}

enum class Magnitude { infinitesimal, finite, infinite };

struct ScalarClass {
  Magnitude magnitude = Magnitude::infinitesimal;
  int sign = 0;

  friend bool operator==(const ScalarClass&, const ScalarClass&) = default;
};

inline const char* to_string(Magnitude m) {
  switch (m) {
    case Magnitude::infinitesimal: return "infinitesimal";
    case Magnitude::finite: return "finite";
    case Magnitude::infinite: return "infinite";
  }
  return "?";
}

/// Zero counts as infinitesimal.
inline ScalarClass classify(const AsymptoticScalar& x) {
  if (x.is_zero()) return {Magnitude::infinitesimal, 0};
  const int lead = x.leading_exponent();
  const Magnitude m = lead > 0 ? Magnitude::infinite
                      : lead == 0 ? Magnitude::finite
                                  : Magnitude::infinitesimal;
  return {m, x.sign()};
}

inline bool is_infinitesimal(const AsymptoticScalar& x) {
  return classify(x).magnitude == Magnitude::infinitesimal;
}

/// x ~ y: the difference is infinitesimal.
inline bool infinitely_close(const AsymptoticScalar& x, const AsymptoticScalar& y) {
  return is_infinitesimal(x - y);
}

/// st(x): the exponent-0 coefficient of a non-infinite scalar, exactly.
inline Rational standard_part(const AsymptoticScalar& x) {
  if (classify(x).magnitude == Magnitude::infinite)
    throw DomainError("standard part of an infinite scalar: " + x.to_string());
  return x.coefficient(0);
}

inline double standard_part_real(const AsymptoticScalar& x) {
  return static_cast<double>(standard_part(x));
}

struct InternalMeasureValue {
  AsymptoticScalar value;
  std::optional<double> loeb_value;  // st(value); present whenever value is finite
};

/// Hyperfinite counting measure |F| / |E|, with its Loeb (standard-part) value.
///
/// The value is subset_size * inverse(set_size): a single shared expansion of
/// 1/|E|, so that the measure stays exactly finitely additive.
inline InternalMeasureValue counting_measure(const AsymptoticScalar& subset_size,
                                             const AsymptoticScalar& set_size,
                                             std::size_t depth = kDefaultInversionDepth) {
  if (set_size.sign() <= 0) throw DomainError("counting measure needs a positive set size");
  if (subset_size.sign() < 0) throw DomainError("counting measure of a negative size");
  if (compare(subset_size, set_size) > 0)
    throw DomainError("subset larger than the set: " + subset_size.to_string() + " > " +
                      set_size.to_string());
  InternalMeasureValue r;
  r.value = subset_size * inverse(set_size, depth);
  if (classify(r.value).magnitude != Magnitude::infinite) r.loeb_value = standard_part_real(r.value);
  return r;
}

}  // namespace hyperfinite::nsa
