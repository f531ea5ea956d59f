#pragma once

// Finite-N truncations of L2(R) and states embedded into them.
//
// A TruncatedSpace is the span of the first N basis functions of a family:
//   hermite  phi_n(x / scale) / sqrt(scale), n < N
//   grid     normalized cell indicators chi_j / sqrt(h) on [-extent/2, extent/2]
//   spin     the two-dimensional record space of an ideal spin measurement

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/hermite.hpp"

namespace hyperfinite {

using Complex = std::complex<double>;

enum class BasisFamily { hermite, grid, spin };

inline const char* to_string(BasisFamily f) {
  switch (f) {
    case BasisFamily::hermite: return "hermite";
    case BasisFamily::grid: return "grid";
    case BasisFamily::spin: return "spin";
  }
  return "?";
}

/// Prefactor of -Laplacian in the kinetic term: hbar^2/2m, or the literal hbar/2m form.
enum class KineticConvention { standard, literal };

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  KineticConvention kinetic = KineticConvention::standard;

  double kinetic_prefactor() const {
    return kinetic == KineticConvention::standard ? hbar * hbar / (2.0 * mass) : hbar / (2.0 * mass);
  }
  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

struct SpaceSpec {
  BasisFamily family = BasisFamily::hermite;
  long long dim = 1;
  double scale = 1.0;    // basis length (hermite); oscillator length of the presets (all families)
  double extent = 20.0;  // grid only
  PhysicalConstants constants;
};

class TruncatedSpace;
TruncatedSpace build_space(const SpaceSpec& spec);

class TruncatedSpace {
 public:
  BasisFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(dim_); }
  double scale() const { return scale_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / static_cast<double>(dim_); }
  const PhysicalConstants& constants() const { return constants_; }

  double cell_lower(std::size_t j) const { return -0.5 * extent_ + static_cast<double>(j) * spacing(); }
  double cell_center(std::size_t j) const { return cell_lower(j) + 0.5 * spacing(); }

  /// Values b_0(x) .. b_{N-1}(x) of the real basis functions.
  std::vector<double> basis_values(double x) const {
    switch (family_) {
      case BasisFamily::hermite: {
        auto v = hermite::functions(x / scale_, dim_);
        const double f = 1.0 / std::sqrt(scale_);
        for (double& e : v) e *= f;
        return v;
      }
      case BasisFamily::grid: {
        std::vector<double> v(dim_, 0.0);
        const double h = spacing();
        const double u = (x + 0.5 * extent_) / h;
        if (u >= 0.0 && u < static_cast<double>(dim_)) v[static_cast<std::size_t>(u)] = 1.0 / std::sqrt(h);
        return v;
      }
      case BasisFamily::spin: break;
    }
    throw ConfigError("the spin record space has no position representation");
  }

  std::string describe() const {
    std::string s = std::string(to_string(family_)) + " N=" + std::to_string(dim_);
    if (family_ == BasisFamily::grid) s += " L=" + std::to_string(extent_);
    return s;
  }

  friend bool operator==(const TruncatedSpace&, const TruncatedSpace&) = default;

 private:
  TruncatedSpace() = default;
  friend TruncatedSpace build_space(const SpaceSpec& spec);

  BasisFamily family_ = BasisFamily::hermite;
  std::size_t dim_ = 1;
  double scale_ = 1.0;
  double extent_ = 0.0;
  PhysicalConstants constants_;
};

inline TruncatedSpace build_space(const SpaceSpec& spec) {
  if (spec.dim < 1) throw ConfigError("dim must be >= 1 (got " + std::to_string(spec.dim) + ")");
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) throw ConfigError("scale must be positive");
  if (!(spec.constants.hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (!(spec.constants.mass > 0.0)) throw ConfigError("mass must be positive");
  TruncatedSpace s;
  s.family_ = spec.family;
  s.dim_ = static_cast<std::size_t>(spec.dim);
  s.scale_ = spec.scale;
  s.constants_ = spec.constants;
  switch (spec.family) {
    case BasisFamily::hermite: break;
    case BasisFamily::grid:
      if (!(spec.extent > 0.0) || !std::isfinite(spec.extent)) throw ConfigError("grid extent must be positive");
      s.extent_ = spec.extent;
      break;
    case BasisFamily::spin:
      if (spec.dim != 2) throw ConfigError("the spin record space has dim 2");
      break;
  }
  return s;
}

inline TruncatedSpace hermite_space(long long dim, double scale = 1.0, PhysicalConstants constants = {}) {
  return build_space({BasisFamily::hermite, dim, scale, 0.0, constants});
}

inline TruncatedSpace grid_space(long long dim, double extent, double scale = 1.0,
                                 PhysicalConstants constants = {}) {
  return build_space({BasisFamily::grid, dim, scale, extent, constants});
}

inline TruncatedSpace spin_record_space() { return build_space({BasisFamily::spin, 2, 1.0, 0.0, {}}); }

inline constexpr double kNormTolerance = 1e-10;

/// Coefficients of a state in a space's basis.
class StateVector {
 public:
  /// Requires a unit vector (within 1e-10).
  StateVector(TruncatedSpace space, Eigen::VectorXcd coefficients, std::string label = {})
      : space_(std::move(space)), coefficients_(std::move(coefficients)), label_(std::move(label)) {
    check_size();
    if (std::abs(coefficients_.norm() - 1.0) > kNormTolerance)
      throw UsageError("state '" + label_ + "' is not normalized (norm " +
                       std::to_string(coefficients_.norm()) + ")");
  }

  static StateVector unnormalized(TruncatedSpace space, Eigen::VectorXcd coefficients, std::string label = {}) {
    StateVector s(std::move(space), std::move(coefficients), std::move(label), Unchecked{});
    s.normalized_ = false;
    return s;
  }

  static StateVector basis(const TruncatedSpace& space, std::size_t n, std::string label = {}) {
    if (n >= space.dim()) throw ConfigError("basis index " + std::to_string(n) + " >= dim");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(space.size());
    c[static_cast<Eigen::Index>(n)] = 1.0;
    return StateVector(space, std::move(c), label.empty() ? "e" + std::to_string(n) : std::move(label));
  }

  const TruncatedSpace& space() const { return space_; }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }
  const std::string& label() const { return label_; }
  bool flagged_normalized() const { return normalized_; }
  double norm() const { return coefficients_.norm(); }

 private:
  struct Unchecked {};
  StateVector(TruncatedSpace space, Eigen::VectorXcd coefficients, std::string label, Unchecked)
      : space_(std::move(space)), coefficients_(std::move(coefficients)), label_(std::move(label)) {
    check_size();
  }
  void check_size() const {
    if (coefficients_.size() != space_.size())
      throw UsageError("coefficient vector length " + std::to_string(coefficients_.size()) +
                       " does not match space dim " + std::to_string(space_.dim()));
  }

  TruncatedSpace space_;
  Eigen::VectorXcd coefficients_;
  std::string label_;
  bool normalized_ = true;
};

inline void require_same_space(const TruncatedSpace& a, const TruncatedSpace& b, const char* what) {
  if (!(a == b)) throw UsageError(std::string(what) + ": space mismatch (" + a.describe() + " vs " + b.describe() + ")");
}

/// <a|b>, conjugate-linear in a.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  require_same_space(a.space(), b.space(), "inner_product");
  return a.coefficients().dot(b.coefficients());
}

namespace preset {
/// n-th eigenstate of the oscillator whose length is the space scale.
struct HoEigenstate {
  std::size_t n = 0;
};
/// Oscillator coherent state |z>, with <x> = sqrt(2) Re z * scale.
struct Coherent {
  Complex z{0.0, 0.0};
};
/// Real Gaussian packet (pi w^2)^(-1/4) exp(-(x-c)^2 / (2 w^2)).
struct Gaussian {
  double center = 0.0;
  double width = 1.0;
};
struct Custom {
  std::vector<Complex> coefficients;
};
}  // namespace preset

using StatePreset = std::variant<preset::HoEigenstate, preset::Coherent, preset::Gaussian, preset::Custom>;

inline std::string describe(const StatePreset& p) {
  struct V {
    std::string operator()(const preset::HoEigenstate& e) const { return "ho_eigenstate n=" + std::to_string(e.n); }
    std::string operator()(const preset::Coherent& c) const {
      return "coherent z=" + std::to_string(c.z.real()) + (c.z.imag() != 0.0 ? "+" + std::to_string(c.z.imag()) + "i" : "");
    }
    std::string operator()(const preset::Gaussian& g) const {
      return "gaussian center=" + std::to_string(g.center) + " width=" + std::to_string(g.width);
    }
    std::string operator()(const preset::Custom&) const { return "custom"; }
  };
  return std::visit(V{}, p);
}

struct EmbeddingReport {
  StateVector state;
  double residual = 0.0;     // ||phi - E_H phi|| for the unit-norm source state
  double tail_weight = 0.0;  // residual^2, kept separately so that tiny tails do not underflow
};

namespace detail {

/// Hermite-basis expansion coefficients (unit oscillator length) of a
/// closed-form preset, generated term by term.
class CoefficientSeries {
 public:
  explicit CoefficientSeries(const preset::Coherent& c) : coherent_(true), z_(c.z) {}

  /// Gaussian of center c and width w (both in units of the oscillator length).
  /// Generating function: sum_n <phi_n|g> t^n / sqrt(n!) = K exp(a t^2 + b t), hence
  /// u_{n+1} = (b u_n + 2a sqrt(n) u_{n-1}) / sqrt(n+1), u_0 = K.
  CoefficientSeries(double center, double width) {
    const double w2 = width * width;
    const double A = 0.5 * (1.0 + 1.0 / w2);
    a_ = 1.0 / (2.0 * A) - 0.5;
    b_ = std::numbers::sqrt2 * center / (2.0 * A * w2);
    const double log_k = -0.25 * std::log(std::numbers::pi) - 0.25 * std::log(std::numbers::pi * w2) +
                         0.5 * std::log(std::numbers::pi / A) + center * center / (4.0 * A * w2 * w2) -
                         center * center / (2.0 * w2);
    k_ = std::exp(log_k);
  }

  /// Coefficient n; calls must be in increasing n starting at 0.
  Complex next() {
    const std::size_t n = n_++;
    if (coherent_) {
      const double r = std::abs(z_);
      if (r == 0.0) return n == 0 ? Complex(1.0) : Complex(0.0);
      const double dn = static_cast<double>(n);
      const double log_mag = -0.5 * r * r + dn * std::log(r) - 0.5 * std::lgamma(dn + 1.0);
      return std::polar(std::exp(log_mag), dn * std::arg(z_));
    }
    double u;
    if (n == 0) {
      u = k_;
    } else if (n == 1) {
      u = b_ * k_;
    } else {
      const double m = static_cast<double>(n - 1);
      u = (b_ * prev1_ + 2.0 * a_ * std::sqrt(m) * prev2_) / std::sqrt(m + 1.0);
    }
    prev2_ = prev1_;
    prev1_ = u;
    return u;
  }

 private:
  bool coherent_ = false;
  Complex z_;
  double a_ = 0.0, b_ = 0.0, k_ = 0.0;
  double prev1_ = 0.0, prev2_ = 0.0;
  std::size_t n_ = 0;
};

/// First `count` coefficients plus the exact-series tail sum_{n >= count} |c_n|^2.
inline std::pair<std::vector<Complex>, double> coefficients_and_tail(CoefficientSeries series, std::size_t count) {
  std::vector<Complex> c(count);
  for (auto& v : c) v = series.next();
  double tail = 0.0;
  std::size_t quiet = 0;
  for (std::size_t n = count; n < count + 2000000; ++n) {
    const double t = std::norm(series.next());
    tail += t;
    quiet = (t <= 1e-34 * tail || t == 0.0) ? quiet + 1 : 0;
    if (quiet >= 32 && (tail > 0.0 || n > count + 4096)) break;
  }
  return {std::move(c), tail};
}

inline void require_closed_form(const StatePreset& p, const char* where) {
  if (std::holds_alternative<preset::Custom>(p))
    throw ConfigError(std::string(where) + ": custom coefficient presets have no closed form");
}

}  // namespace detail

/// Analytic wavefunction of a closed-form preset, for an oscillator of length `scale`.
inline Complex wavefunction(const StatePreset& p, double x, double scale = 1.0) {
  detail::require_closed_form(p, "wavefunction");
  const double u = x / scale;
  const double norm = 1.0 / std::sqrt(scale);
  if (const auto* e = std::get_if<preset::HoEigenstate>(&p)) return norm * hermite::function(e->n, u);
  if (const auto* c = std::get_if<preset::Coherent>(&p)) {
    // sum_n e^{-|z|^2/2} z^n / sqrt(n!) phi_n(u)
    const Complex z = c->z;
    const Complex expo = -0.5 * u * u + std::numbers::sqrt2 * z * u - 0.5 * z * z - 0.5 * std::norm(z);
    return norm * std::pow(std::numbers::pi, -0.25) * std::exp(expo);
  }
  const auto& g = std::get<preset::Gaussian>(p);
  const double d = (x - g.center) / g.width;
  return std::pow(std::numbers::pi * g.width * g.width, -0.25) * std::exp(-0.5 * d * d);
}

namespace detail {

inline EmbeddingReport finish_embedding(const TruncatedSpace& space, Eigen::VectorXcd c, double tail,
                                        std::string label) {
  const double kept = c.squaredNorm();
  if (!(kept > 0.0)) throw ConfigError("preset '" + label + "' has no weight in " + space.describe());
  c /= std::sqrt(kept);
  tail = std::max(tail, 0.0);
  return {StateVector(space, std::move(c), std::move(label)), std::sqrt(tail), tail};
}

/// Cell averages (times sqrt(h)) of a wavefunction by composite Gauss-Legendre.
inline EmbeddingReport embed_on_grid(const StatePreset& p, const TruncatedSpace& space, std::string label) {
  double feature = space.scale();
  if (const auto* g = std::get_if<preset::Gaussian>(&p)) feature = std::min(feature, g->width);
  if (const auto* c = std::get_if<preset::Coherent>(&p))
    feature = std::min(feature, space.scale() / (1.0 + std::abs(c->z.imag())));
  if (const auto* e = std::get_if<preset::HoEigenstate>(&p))
    feature = space.scale() / std::sqrt(2.0 * static_cast<double>(e->n) + 1.0);

  const double h = space.spacing();
  const auto panels = static_cast<std::size_t>(std::ceil(h / (0.05 * feature)));
  const double pw = h / static_cast<double>(panels);
  Eigen::VectorXcd c(space.size());
  for (std::size_t j = 0; j < space.dim(); ++j) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
      const double lo = space.cell_lower(j) + static_cast<double>(k) * pw;
      const double re = boost::math::quadrature::gauss<double, 15>::integrate(
          [&](double x) { return wavefunction(p, x, space.scale()).real(); }, lo, lo + pw);
      const double im = boost::math::quadrature::gauss<double, 15>::integrate(
          [&](double x) { return wavefunction(p, x, space.scale()).imag(); }, lo, lo + pw);
      acc += Complex(re, im);
    }
    c[static_cast<Eigen::Index>(j)] = acc / std::sqrt(h);
  }
  const double tail = 1.0 - c.squaredNorm();
  return finish_embedding(space, std::move(c), tail, std::move(label));
}

}  // namespace detail

/// Truncated, renormalized expansion of a preset state, with its projection residual.
///
/// Hermite family: coefficients are closed-form (oscillator eigenstates, coherent
/// states, Gaussians through their generating function) and the residual comes
/// from the exact series tail. Grid family: cell averages by quadrature, residual
/// from 1 - sum |c_j|^2.
inline EmbeddingReport embed_state(const StatePreset& p, const TruncatedSpace& space) {
  std::string label = describe(p);
  if (const auto* e = std::get_if<preset::HoEigenstate>(&p)) {
    if (e->n >= space.dim())
      throw ConfigError("ho_eigenstate n=" + std::to_string(e->n) + " requires dim > n (dim " +
                        std::to_string(space.dim()) + ")");
  }
  if (const auto* g = std::get_if<preset::Gaussian>(&p)) {
    if (!(g->width > 0.0)) throw ConfigError("gaussian width must be positive");
  }
  if (const auto* custom = std::get_if<preset::Custom>(&p)) {
    if (custom->coefficients.size() != space.dim())
      throw ConfigError("custom coefficients: expected " + std::to_string(space.dim()) + " values, got " +
                        std::to_string(custom->coefficients.size()));
    Eigen::VectorXcd c(space.size());
    for (std::size_t i = 0; i < space.dim(); ++i) c[static_cast<Eigen::Index>(i)] = custom->coefficients[i];
    return detail::finish_embedding(space, std::move(c), 0.0, std::move(label));
  }
  if (space.family() == BasisFamily::spin)
    throw ConfigError("the spin record space accepts only custom coefficients");

  if (space.family() == BasisFamily::grid) return detail::embed_on_grid(p, space, std::move(label));

  if (const auto* e = std::get_if<preset::HoEigenstate>(&p)) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(space.size());
    c[static_cast<Eigen::Index>(e->n)] = 1.0;
    return {StateVector(space, std::move(c), std::move(label)), 0.0, 0.0};
  }
  auto series = [&]() {
    if (const auto* c = std::get_if<preset::Coherent>(&p)) return detail::CoefficientSeries(*c);
    const auto& g = std::get<preset::Gaussian>(p);
    return detail::CoefficientSeries(g.center / space.scale(), g.width / space.scale());
  }();
  auto [coeffs, tail] = detail::coefficients_and_tail(series, space.dim());
  Eigen::VectorXcd c(space.size());
  for (std::size_t i = 0; i < space.dim(); ++i) c[static_cast<Eigen::Index>(i)] = coeffs[i];
  return detail::finish_embedding(space, std::move(c), tail, std::move(label));
}

}  // namespace hyperfinite
