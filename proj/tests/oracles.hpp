#pragma once

// Reference computations for the tests, written independently of the library:
// Hermite functions from boost's physicists' polynomials, overlaps by adaptive
// Gauss-Kronrod, polynomial roots by bracketing plus Newton, and a few values
// frozen from offline high-precision runs.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Orthonormal Hermite function from H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)); fine for n <= 60.
inline double phi(unsigned n, double x) {
  const double norm = std::sqrt(std::ldexp(boost::math::factorial<double>(n), static_cast<int>(n)) * std::sqrt(std::numbers::pi));
  return boost::math::hermite(n, x) * std::exp(-0.5 * x * x) / norm;
}

inline double integrate(const std::function<double(double)>& f, double a = -16.0, double b = 16.0) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15);
}

/// Roots of H_n by scanning for sign changes and polishing with Newton (H_n' = 2n H_{n-1}).
inline std::vector<double> hermite_roots(unsigned n) {
  std::vector<double> roots;
  const double reach = std::sqrt(2.0 * n + 1.0) + 1.0;
  const int steps = 4000 * static_cast<int>(n);
  auto h = [n](double x) { return boost::math::hermite(n, x); };
  double prev_x = -reach, prev = h(prev_x);
  for (int k = 1; k <= steps; ++k) {
    const double x = -reach + 2.0 * reach * k / steps;
    const double v = h(x);
    if (v == 0.0 || (v > 0) != (prev > 0)) {
      double r = v == 0.0 ? x : 0.5 * (x + prev_x);
      for (int it = 0; it < 50; ++it) {
        const double d = 2.0 * n * boost::math::hermite(n - 1, r);
        const double step = h(r) / d;
        r -= step;
        if (std::abs(step) < 1e-16) break;
      }
      roots.push_back(r);
      if (v == 0.0) {
        prev_x = x + 1e-12;
        prev = h(prev_x);
        continue;
      }
    }
    prev_x = x;
    prev = v;
  }
  return roots;
}

/// erf(1), to the precision of a double.
inline constexpr double kErf1 = 0.8427007929497148693;

/// max over lambda in {-2.0, -1.9, ..., 2.0} of the distance to the nearest
/// Gauss-Hermite node, for N = 16, 64, 256, 1024 (nodes from an independent
/// Golub-Welsch run in extended precision).
inline constexpr double kGridNodeDistance[4] = {0.27704855085534419, 0.13830224498700971, 0.069352394529545114,
                                                0.034701553262360255};
/// Half the largest node gap inside (-2.5, 2.5) for the same N: the spacing
/// bound every grid point must meet.
inline constexpr double kSpacingBound[4] = {0.28576472585868662, 0.14104085437531944, 0.069732704471706874,
                                            0.034751675305160878};

/// 1 - e^{-1} sum_{n<N} 1/n!, the squared tail of the z=1 coherent state, for N = 4, 16, 32, 64, 128.
inline constexpr double kCoherentTail[5] = {0.018988156876153809, 1.8677634631680655e-14, 1.4417345421413976e-36,
                                            2.9445599339487986e-90, 9.6144614260797953e-217};

/// sum_{i : |i/K - 0.36| < 0.02} C(K,i) 0.36^i 0.64^(K-i), K = 10^4, exact rational arithmetic.
inline constexpr double kFrequencyK1e4 = 0.99996767819677867;
inline constexpr double kFrequencyK100 = 0.24513069629765066;
inline constexpr double kFrequencyK1000 = 0.80113091172874203;

}  // namespace oracle
