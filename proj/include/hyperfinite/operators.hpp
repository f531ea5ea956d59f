#pragma once

// Natural extensions T_H = E_H o T of standard operators as Hermitian N x N
// matrices, and their eigensystems.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/hermite.hpp"
#include "hyperfinite/statespace.hpp"

namespace hyperfinite {

enum class ObservableKind { position, momentum, kinetic, potential, hamiltonian, custom };

inline const char* to_string(ObservableKind k) {
  switch (k) {
    case ObservableKind::position: return "X";
    case ObservableKind::momentum: return "P";
    case ObservableKind::kinetic: return "T";
    case ObservableKind::potential: return "V";
    case ObservableKind::hamiltonian: return "H";
    case ObservableKind::custom: return "custom";
  }
  return "?";
}

/// V(x) = sum_k coefficients[k] x^k
struct Polynomial {
  std::vector<double> coefficients;

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
};

using PotentialFunction = std::function<double(double)>;
/// Polynomials take the exact ladder-algebra path; callables are sampled by quadrature.
using PotentialSpec = std::variant<Polynomial, PotentialFunction>;

inline constexpr double kHermitianTolerance = 1e-12;

inline double hermitian_defect(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

class ObservableMatrix {
 public:
  ObservableMatrix(TruncatedSpace space, ObservableKind kind, Eigen::MatrixXcd entries, std::string label = {})
      : space_(std::move(space)), kind_(kind), entries_(std::move(entries)), label_(std::move(label)) {
    if (entries_.rows() != space_.size() || entries_.cols() != space_.size())
      throw UsageError("observable matrix is " + std::to_string(entries_.rows()) + "x" +
                       std::to_string(entries_.cols()) + ", space dim " + std::to_string(space_.dim()));
    const double defect = ::hyperfinite::hermitian_defect(entries_);
    if (!(defect <= kHermitianTolerance))
      throw NumericalError("observable '" + label_ + "' is not Hermitian: max |M - M^dagger| = " +
                           std::to_string(defect));
    if (label_.empty()) label_ = to_string(kind_);
  }

  const TruncatedSpace& space() const { return space_; }
  ObservableKind kind() const { return kind_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  const std::string& label() const { return label_; }
  double hermitian_defect() const { return hyperfinite::hermitian_defect(entries_); }
  double trace() const { return entries_.trace().real(); }

  double expectation(const StateVector& s) const {
    require_same_space(space_, s.space(), "expectation");
    return s.coefficients().dot(entries_ * s.coefficients()).real();
  }

 private:
  TruncatedSpace space_;
  ObservableKind kind_;
  Eigen::MatrixXcd entries_;
  std::string label_;
};

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

/// <n| (a^dagger + sign a)^k |m> for n, m < dim, from the integer recurrence
/// G'(j) = G(j-1) + sign (j+1) G(j+1), where <j|v> = sqrt(j!/m!) G(j).
///
/// Only n >= m is computed, as G * sqrt(m+1 ... n); the upper triangle is the
/// mirror image (conjugated by the caller's phase), so the result is exactly
/// (anti)symmetric.
inline Eigen::MatrixXd ladder_power(std::size_t dim, int k, int sign) {
  const auto n_dim = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_dim, n_dim);
  const auto uk = static_cast<std::size_t>(k);
  for (std::size_t m = 0; m < dim; ++m) {
    const std::size_t lo = m >= uk ? m - uk : 0;
    const std::size_t width = m + uk - lo + 1;
    std::vector<BigInt> g(width + 2, 0), next(width + 2, 0);  // index j - lo + 1, with zero guards
    g[m - lo + 1] = 1;
    for (int step = 0; step < k; ++step) {
      for (std::size_t idx = 1; idx <= width; ++idx) {
        const std::size_t j = lo + idx - 1;
        BigInt v = g[idx - 1];  // g[0] is a zero guard
        const BigInt up = BigInt(j + 1) * g[idx + 1];
        if (sign > 0)
          v += up;
        else
          v -= up;
        next[idx] = v;
      }
      std::swap(g, next);
      std::fill(next.begin(), next.end(), 0);
    }
    for (std::size_t n = m; n < std::min(dim, m + uk + 1); ++n) {
      const BigInt& gn = g[n - lo + 1];
      if (gn == 0) continue;
      BigInt r = 1;
      for (std::size_t j = m + 1; j <= n; ++j) r *= j;
      const double value = gn.convert_to<double>() * std::sqrt(r.convert_to<double>());
      out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = value;
    }
  }
  for (Eigen::Index n = 0; n < n_dim; ++n)
    for (Eigen::Index m = n + 1; m < n_dim; ++m) out(n, m) = (sign > 0 || k % 2 == 0) ? out(m, n) : -out(m, n);
  return out;
}

inline double pow2_half(int k) {  // 2^(-k/2)
  double f = std::ldexp(1.0, -(k / 2));
  if (k % 2 != 0) f *= std::sqrt(0.5);
  return f;
}

/// Dimensionless x^k = ((a + a^dagger)/sqrt 2)^k in the Hermite basis.
inline Eigen::MatrixXcd hermite_position_power(std::size_t dim, int k) {
  return (ladder_power(dim, k, +1) * pow2_half(k)).cast<Complex>();
}

/// Dimensionless p^k = (i (a^dagger - a)/sqrt 2)^k in the Hermite basis.
inline Eigen::MatrixXcd hermite_momentum_power(std::size_t dim, int k) {
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Eigen::MatrixXd raw = ladder_power(dim, k, -1) * pow2_half(k);
  const Complex phase = kIPowers[k % 4];
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = phase * raw(r, c);
  return out;
}

inline Eigen::MatrixXcd hermite_polynomial_potential(const TruncatedSpace& space, const Polynomial& v) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space.size(), space.size());
  for (std::size_t k = 0; k < v.coefficients.size(); ++k) {
    const double c = v.coefficients[k];
    if (c == 0.0) continue;
    const double f = c * std::pow(space.scale(), static_cast<double>(k));
    if (k == 0) {
      out.diagonal().array() += f;
      continue;
    }
    out += f * hermite_position_power(space.dim(), static_cast<int>(k));
  }
  return out;
}

/// <phi_i | V(scale * u) | phi_j> by a Gauss-Hermite rule of order 2N + 16.
inline Eigen::MatrixXcd hermite_quadrature_potential(const TruncatedSpace& space, const PotentialFunction& v) {
  const std::size_t order = 2 * space.dim() + 16;
  const auto rule = hermite::gauss_rule(order);
  const auto n = space.size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < order; ++k) {
    const double vk = v(space.scale() * rule.nodes[k]);
    if (!std::isfinite(vk)) throw NumericalError("potential is not finite at x=" + std::to_string(rule.nodes[k]));
    const auto phi = hermite::functions(rule.nodes[k], space.dim());
    const Eigen::Map<const Eigen::VectorXd> p(phi.data(), n);
    acc.noalias() += (rule.scaled_weights[k] * vk) * (p * p.transpose());
  }
  return acc.cast<Complex>();
}

inline Eigen::MatrixXcd grid_potential(const TruncatedSpace& space, const PotentialSpec& v) {
  const auto n = space.size();
  const double h = space.spacing();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < space.dim(); ++j) {
    const double a = space.cell_lower(j), b = a + h;
    double avg;
    if (const auto* poly = std::get_if<Polynomial>(&v)) {
      avg = 0.0;  // exact cell average of sum c_k x^k
      for (std::size_t k = 0; k < poly->coefficients.size(); ++k) {
        const double e = static_cast<double>(k + 1);
        avg += poly->coefficients[k] * (std::pow(b, e) - std::pow(a, e)) / e;
      }
      avg /= h;
    } else {
      const auto& f = std::get<PotentialFunction>(v);
      avg = boost::math::quadrature::gauss<double, 15>::integrate(f, a, b) / h;
      if (!std::isfinite(avg)) throw NumericalError("potential cell average is not finite");
    }
    out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = avg;
  }
  return out;
}

inline Eigen::MatrixXcd potential_matrix(const TruncatedSpace& space, const PotentialSpec& v) {
  if (space.family() == BasisFamily::grid) return grid_potential(space, v);
  if (const auto* poly = std::get_if<Polynomial>(&v)) return hermite_polynomial_potential(space, *poly);
  return hermite_quadrature_potential(space, std::get<PotentialFunction>(v));
}

/// prefactor * (-Laplacian)
inline Eigen::MatrixXcd kinetic_matrix(const TruncatedSpace& space) {
  const double c = space.constants().kinetic_prefactor();
  if (space.family() == BasisFamily::hermite) {
    const double s = space.scale();
    return (c / (s * s)) * hermite_momentum_power(space.dim(), 2);
  }
  // Grid: second-difference Laplacian (cell indicators are not in the domain of
  // the Laplacian, so this is a discretization rather than an exact projection).
  const auto n = space.size();
  const double h = space.spacing();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = 2.0 * c / (h * h);
    if (j + 1 < n) out(j, j + 1) = out(j + 1, j) = -c / (h * h);
  }
  return out;
}

inline Eigen::MatrixXcd position_matrix(const TruncatedSpace& space) {
  if (space.family() == BasisFamily::hermite) return space.scale() * hermite_position_power(space.dim(), 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space.size(), space.size());
  for (std::size_t j = 0; j < space.dim(); ++j)
    out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = space.cell_center(j);
  return out;
}

inline Eigen::MatrixXcd momentum_matrix(const TruncatedSpace& space) {
  const double hbar = space.constants().hbar;
  if (space.family() == BasisFamily::hermite) return (hbar / space.scale()) * hermite_momentum_power(space.dim(), 1);
  const auto n = space.size();
  const double h = space.spacing();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  const Complex f(0.0, -hbar / (2.0 * h));  // -i hbar (psi_{j+1} - psi_{j-1}) / 2h
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    out(j, j + 1) = f;
    out(j + 1, j) = std::conj(f);
  }
  return out;
}

}  // namespace detail

/// T_H for a standard operator T: entries <b_i | T b_j>.
inline ObservableMatrix natural_extension(ObservableKind kind, const TruncatedSpace& space,
                                          const std::optional<PotentialSpec>& potential = std::nullopt) {
  if (space.family() == BasisFamily::spin)
    throw ConfigError("the spin record space supports custom observables only");
  const bool needs_potential = kind == ObservableKind::potential || kind == ObservableKind::hamiltonian;
  if (needs_potential && !potential) throw ConfigError(std::string(to_string(kind)) + " requires a potential");
  switch (kind) {
    case ObservableKind::position: return {space, kind, detail::position_matrix(space)};
    case ObservableKind::momentum: return {space, kind, detail::momentum_matrix(space)};
    case ObservableKind::kinetic: return {space, kind, detail::kinetic_matrix(space)};
    case ObservableKind::potential: return {space, kind, detail::potential_matrix(space, *potential)};
    case ObservableKind::hamiltonian: {
      Eigen::MatrixXcd h = detail::kinetic_matrix(space);
      h += detail::potential_matrix(space, *potential);
      return {space, kind, std::move(h)};
    }
    case ObservableKind::custom: break;
  }
  throw ConfigError("custom observables are built with custom_observable()");
}

inline ObservableMatrix custom_observable(const TruncatedSpace& space, Eigen::MatrixXcd entries, std::string label) {
  const double defect = hermitian_defect(entries);
  if (!(defect <= kHermitianTolerance))
    throw UsageError("custom observable '" + label + "' is not Hermitian (defect " + std::to_string(defect) + ")");
  return {space, ObservableKind::custom, std::move(entries), std::move(label)};
}

/// Eigenvalues ascending, orthonormal eigenvectors as columns.
///
/// Ordering and phases are canonical: degenerate blocks (relative gap
/// <= 1e-10) are re-orthonormalized by modified Gram-Schmidt in solver order,
/// and every eigenvector is rotated so that its first largest-magnitude
/// component is real and positive.
class SpectralDecomposition {
 public:
  SpectralDecomposition(std::shared_ptr<const ObservableMatrix> source, Eigen::VectorXd eigenvalues,
                        Eigen::MatrixXcd eigenvectors, std::optional<std::vector<Eigen::Index>> permutation)
      : source_(std::move(source)),
        eigenvalues_(std::move(eigenvalues)),
        eigenvectors_(std::move(eigenvectors)),
        permutation_(std::move(permutation)) {}

  const ObservableMatrix& source() const { return *source_; }
  const std::shared_ptr<const ObservableMatrix>& source_ptr() const { return source_; }
  const TruncatedSpace& space() const { return source_->space(); }
  Eigen::Index size() const { return eigenvalues_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
  double eigenvalue(Eigen::Index i) const { return eigenvalues_[i]; }

  /// Set when every eigenvector is exactly a standard basis vector: column i is e_{(*perm)[i]}.
  const std::optional<std::vector<Eigen::Index>>& basis_permutation() const { return permutation_; }

  StateVector eigenvector(Eigen::Index i) const {
    return StateVector(space(), eigenvectors_.col(i), source_->label() + " eigenvector " + std::to_string(i));
  }

  /// Coefficients of a state in the eigenbasis: alpha_i = <psi_i | phi>.
  Eigen::VectorXcd to_eigenbasis(const Eigen::VectorXcd& c) const {
    if (permutation_) {
      Eigen::VectorXcd out(c.size());
      for (Eigen::Index i = 0; i < c.size(); ++i) out[i] = c[(*permutation_)[static_cast<std::size_t>(i)]];
      return out;
    }
    return eigenvectors_.adjoint() * c;
  }
  Eigen::VectorXcd from_eigenbasis(const Eigen::VectorXcd& a) const {
    if (permutation_) {
      Eigen::VectorXcd out(a.size());
      for (Eigen::Index i = 0; i < a.size(); ++i) out[(*permutation_)[static_cast<std::size_t>(i)]] = a[i];
      return out;
    }
    return eigenvectors_ * a;
  }

 private:
  std::shared_ptr<const ObservableMatrix> source_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  std::optional<std::vector<Eigen::Index>> permutation_;
};

namespace detail {

inline bool exactly_diagonal(const Eigen::MatrixXcd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
  return true;
}

inline bool is_real(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

inline void canonicalize(const Eigen::VectorXd& values, Eigen::MatrixXcd& vecs) {
  const Eigen::Index n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n &&
           std::abs(values[end] - values[start]) <= 1e-10 * std::max(1.0, std::abs(values[start])))
      ++end;
    if (end - start > 1) {
      for (Eigen::Index i = start; i < end; ++i) {
        for (Eigen::Index j = start; j < i; ++j) vecs.col(i) -= vecs.col(j).dot(vecs.col(i)) * vecs.col(j);
        vecs.col(i).normalize();
      }
    }
    start = end;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      const double a = std::abs(vecs(r, i));
      if (a > best * (1.0 + 1e-12)) {
        best = a;
        arg = r;
      }
    }
    const Complex c = vecs(arg, i);
    if (c.imag() == 0.0 && c.real() > 0.0) continue;
    vecs.col(i) *= std::conj(c) / std::abs(c);
    vecs(arg, i) = Complex(std::abs(vecs(arg, i)), 0.0);
  }
}

}  // namespace detail

inline SpectralDecomposition diagonalize(std::shared_ptr<const ObservableMatrix> op) {
  const Eigen::MatrixXcd& m = op->entries();
  const Eigen::Index n = m.rows();
  const double defect = hermitian_defect(m);
  if (!(defect <= kHermitianTolerance))
    throw UsageError("diagonalize: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

  if (detail::exactly_diagonal(m)) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return m(a, a).real() < m(b, b).real(); });
    Eigen::VectorXd values(n);
    Eigen::MatrixXcd vecs = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index src = order[static_cast<std::size_t>(i)];
      values[i] = m(src, src).real();
      vecs(src, i) = 1.0;
    }
    return {std::move(op), std::move(values), std::move(vecs), std::move(order)};
  }

  Eigen::VectorXd values;
  Eigen::MatrixXcd vecs;
  if (detail::is_real(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real());
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = solver.eigenvalues();
    vecs = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = solver.eigenvalues();
    vecs = solver.eigenvectors();
  }
  detail::canonicalize(values, vecs);
  return {std::move(op), std::move(values), std::move(vecs), std::nullopt};
}

inline SpectralDecomposition diagonalize(const ObservableMatrix& op) {
  return diagonalize(std::make_shared<const ObservableMatrix>(op));
}

struct NearestEigenvalue {
  double value = 0.0;
  double distance = 0.0;
  Eigen::Index index = 0;
};

/// Closest eigenvalue to lambda; ties go to the smaller eigenvalue.
inline NearestEigenvalue nearest_eigenvalue(double lambda, const SpectralDecomposition& spec) {
  const auto& ev = spec.eigenvalues();
  if (ev.size() == 0) throw UsageError("nearest_eigenvalue: empty spectrum");
  const double* begin = ev.data();
  const double* end = begin + ev.size();
  const double* it = std::lower_bound(begin, end, lambda);
  Eigen::Index best;
  if (it == end) {
    best = ev.size() - 1;
  } else if (it == begin) {
    best = 0;
  } else {
    const Eigen::Index hi = it - begin;
    const Eigen::Index lo = hi - 1;
    best = (lambda - ev[lo] <= ev[hi] - lambda) ? lo : hi;
  }
  return {ev[best], std::abs(lambda - ev[best]), best};
}

struct LocalizationProfile {
  std::vector<double> x;
  std::vector<double> density;  // |psi_i(x)|^2
  double peak_location = 0.0;
  double peak_density = 0.0;
  double eigenvalue = 0.0;
  double offset = 0.0;  // peak_location - eigenvalue
};

/// Reconstructs psi_i(x) = sum_n c_n b_n(x) on the probe grid and locates its peak.
inline LocalizationProfile eigenvector_localization(const SpectralDecomposition& spec, Eigen::Index i,
                                                    const std::vector<double>& probe_grid) {
  if (i < 0 || i >= spec.size()) throw UsageError("eigenvector index out of range");
  if (probe_grid.empty()) throw UsageError("empty probe grid");
  LocalizationProfile p;
  p.eigenvalue = spec.eigenvalue(i);
  p.x = probe_grid;
  p.density.reserve(probe_grid.size());
  const auto col = spec.eigenvectors().col(i);
  for (double x : probe_grid) {
    const auto b = spec.space().basis_values(x);
    Complex psi = 0.0;
    for (Eigen::Index n = 0; n < col.size(); ++n) psi += col[n] * b[static_cast<std::size_t>(n)];
    const double d = std::norm(psi);
    p.density.push_back(d);
    if (d > p.peak_density) {
      p.peak_density = d;
      p.peak_location = x;
    }
  }
  p.offset = p.peak_location - p.eigenvalue;
  return p;
}

}  // namespace hyperfinite
