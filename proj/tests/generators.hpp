#pragma once

// Random inputs shared by the property tests and the acceptance run.

#include <random>

#include "hyperfinite/hyperfinite.hpp"

namespace gen {

using hyperfinite::nsa::AsymptoticScalar;
using hyperfinite::nsa::Rational;

class ScalarGen {
 public:
  explicit ScalarGen(std::uint64_t seed) : g_(seed) {}

  Rational rational() {
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    return Rational(num(g_), den(g_));
  }

  AsymptoticScalar scalar(int lo = -3, int hi = 3) {
    std::uniform_int_distribution<int> count(0, 4), exp(lo, hi);
    AsymptoticScalar::Terms t;
    for (int k = count(g_); k > 0; --k) t[exp(g_)] = rational();
    return AsymptoticScalar::from_terms(t);
  }
  AsymptoticScalar finite() { return scalar(-3, 0); }
  AsymptoticScalar nonzero(int lo = -3, int hi = 3) {
    for (;;) {
      auto s = scalar(lo, hi);
      if (!s.is_zero()) return s;
    }
  }

 private:
  std::mt19937_64 g_;
};

inline hyperfinite::StateVector random_state(std::mt19937_64& g, const hyperfinite::TruncatedSpace& s) {
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(s.size());
  for (auto& e : v) e = hyperfinite::Complex(d(g), d(g));
  return hyperfinite::StateVector(s, v / v.norm(), "random");
}

/// Anharmonic test Hamiltonian with a dense eigenbasis.
inline std::shared_ptr<const hyperfinite::SpectralDecomposition> anharmonic(const hyperfinite::TruncatedSpace& s) {
  using namespace hyperfinite;
  return std::make_shared<const SpectralDecomposition>(
      diagonalize(natural_extension(ObservableKind::hamiltonian, s, PotentialSpec{Polynomial{{0.0, 0.2, 0.5, 0.0, 0.05}}})));
}

inline std::shared_ptr<const hyperfinite::SpectralDecomposition> position(long long n) {
  using namespace hyperfinite;
  return std::make_shared<const SpectralDecomposition>(
      diagonalize(natural_extension(ObservableKind::position, hermite_space(n), std::nullopt)));
}

inline hyperfinite::BranchDecomposition random_decomposition(std::mt19937_64& g, long long n) {
  return hyperfinite::decompose(random_state(g, hyperfinite::hermite_space(n)), position(n));
}

}  // namespace gen
