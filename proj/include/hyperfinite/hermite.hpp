#pragma once

// Hermite functions and Gauss-Hermite rules.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "hyperfinite/errors.hpp"

namespace hyperfinite::hermite {

/// phi_0(x) .. phi_{count-1}(x), the L2-normalized Hermite functions
/// pi^(-1/4) (2^n n!)^(-1/2) H_n(x) exp(-x^2/2).
///
/// The three-term recurrence runs without the Gaussian factor and is rescaled
/// whenever it grows past 1e150; the factor is applied at the end in log
/// space, so large |x| and large n neither overflow nor lose the tail.
inline std::vector<double> functions(double x, std::size_t count) {
  std::vector<double> out(count, 0.0);
  if (count == 0) return out;
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  std::vector<int> scale(count, 0);

  int current_scale = 0;
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  out[0] = cur;
  for (std::size_t n = 0; n + 1 < count; ++n) {
    const double dn = static_cast<double>(n);
    const double next = std::sqrt(2.0 / (dn + 1.0)) * x * cur - std::sqrt(dn / (dn + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      ++current_scale;
    }
    out[n + 1] = cur;
    scale[n + 1] = current_scale;
  }
  for (std::size_t n = 0; n < count; ++n) {
    if (out[n] == 0.0) continue;
    const double log_factor = scale[n] * log_rescale - 0.5 * x * x;
    out[n] = log_factor < -745.0 ? 0.0 : out[n] * std::exp(log_factor);
  }
  return out;
}

inline double function(std::size_t n, double x) { return functions(x, n + 1)[n]; }

/// Nodes and exp(x^2)-scaled weights of the `order`-point Gauss-Hermite rule,
/// so that  int f(x) exp(-x^2) dx  ~  sum_k scaled_weight_k exp(-x_k^2) f(x_k)
/// and  int g(x) dx  ~  sum_k scaled_weight_k g(x_k)  for g = exp(-x^2) * poly.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> scaled_weights;
};

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix with off-diagonal
/// sqrt(k/2). The scaled weights use the Christoffel form
/// 1 / sum_n phi_n(x_k)^2, which stays finite where exp(-x_k^2) underflows.
inline GaussRule gauss_rule(std::size_t order) {
  if (order == 0) throw ConfigError("Gauss-Hermite order must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(order));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(order > 1 ? order - 1 : 0));
  for (Eigen::Index k = 0; k < sub.size(); ++k) sub[k] = std::sqrt(static_cast<double>(k + 1) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigensolver failed");

  GaussRule rule;
  rule.nodes.resize(order);
  rule.scaled_weights.resize(order);
  for (std::size_t k = 0; k < order; ++k) {
    const double x = solver.eigenvalues()[static_cast<Eigen::Index>(k)];
    const auto phi = functions(x, order);
    double s = 0.0;
    for (double v : phi) s += v * v;
    rule.nodes[k] = x;
    rule.scaled_weights[k] = 1.0 / s;
  }
  return rule;
}

}  // namespace hyperfinite::hermite
