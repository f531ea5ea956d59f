#pragma once

// Internal unitary evolution V_t = exp(-i t H_H) and its comparison with the
// closed-form oscillator evolution U_t.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/operators.hpp"
#include "hyperfinite/statespace.hpp"

namespace hyperfinite {

/// exp(-i t H) phi: phases exp(-i lambda_i t) on the eigenbasis coefficients, then back.
inline StateVector evolve(const StateVector& state, const SpectralDecomposition& hamiltonian, double t) {
  require_same_space(state.space(), hamiltonian.space(), "evolve");
  if (t == 0.0) return state;
  Eigen::VectorXcd a = hamiltonian.to_eigenbasis(state.coefficients());
  const auto& ev = hamiltonian.eigenvalues();
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] *= std::polar(1.0, -ev[i] * t);
  Eigen::VectorXcd c = hamiltonian.from_eigenbasis(a);
  if (!state.flagged_normalized()) return StateVector::unnormalized(state.space(), std::move(c), state.label());
  return StateVector(state.space(), std::move(c), state.label());
}

/// V_t for a fixed Hamiltonian.
class Propagator {
 public:
  Propagator(std::shared_ptr<const SpectralDecomposition> hamiltonian, double t)
      : spec_(std::move(hamiltonian)), t_(t) {
    if (!spec_) throw UsageError("propagator without a Hamiltonian");
  }

  double time() const { return t_; }
  const SpectralDecomposition& hamiltonian() const { return *spec_; }

  StateVector apply(const StateVector& state) const {
    return evolve(state, *spec_, t_);
  }

  /// V_{t1} V_{t2} = V_{t1 + t2}
  Propagator then(const Propagator& later) const {
    if (later.spec_ != spec_) throw UsageError("composing propagators of different Hamiltonians");
    return Propagator(spec_, t_ + later.t_);
  }

 private:
  std::shared_ptr<const SpectralDecomposition> spec_;
  double t_;
};

/// Presets with a closed-form oscillator evolution.
using ReferencePreset = std::variant<preset::HoEigenstate, preset::Coherent>;

inline StatePreset to_state_preset(const ReferencePreset& p) {
  return std::visit([](const auto& v) -> StatePreset { return v; }, p);
}

/// hbar * omega of the oscillator matched to the space: omega = hbar / (m scale^2).
inline double oscillator_quantum(const TruncatedSpace& space) {
  const auto& k = space.constants();
  return k.hbar * (k.hbar / (k.mass * space.scale() * space.scale()));
}

/// V(x) = m omega^2 x^2 / 2 for that oscillator.
inline Polynomial oscillator_potential(const TruncatedSpace& space) {
  const auto& k = space.constants();
  const double omega = k.hbar / (k.mass * space.scale() * space.scale());
  return Polynomial{{0.0, 0.0, 0.5 * k.mass * omega * omega}};
}

inline ObservableMatrix oscillator_hamiltonian(const TruncatedSpace& space) {
  return natural_extension(ObservableKind::hamiltonian, space, PotentialSpec{oscillator_potential(space)});
}

/// Closed-form U_t phi embedded into the space.
///
/// Eigenstate n picks up exp(-i E_n t) with E_n = hbar omega (n + 1/2). A
/// coherent state stays coherent with z(t) = z exp(-i omega t) and global
/// phase exp(-i omega t / 2); in the Hermite basis that is the same phase
/// exp(-i E_n t) on every coefficient, which is how it is computed there.
inline EmbeddingReport reference_evolution(const ReferencePreset& p, double t, const TruncatedSpace& space) {
  if (space.family() == BasisFamily::spin) throw ConfigError("no oscillator reference evolution on the spin space");
  const double quantum = oscillator_quantum(space);
  if (space.family() == BasisFamily::hermite) {
    EmbeddingReport r = embed_state(to_state_preset(p), space);
    if (t == 0.0) return r;
    Eigen::VectorXcd c = r.state.coefficients();
    for (Eigen::Index n = 0; n < c.size(); ++n)
      c[n] *= std::polar(1.0, -(static_cast<double>(n) + 0.5) * quantum * t);
    return {StateVector(space, std::move(c), r.state.label() + " t=" + std::to_string(t)), r.residual,
            r.tail_weight};
  }
  const double omega = quantum / space.constants().hbar;
  if (const auto* e = std::get_if<preset::HoEigenstate>(&p)) {
    EmbeddingReport r = embed_state(*e, space);
    Eigen::VectorXcd c = r.state.coefficients() * std::polar(1.0, -(static_cast<double>(e->n) + 0.5) * quantum * t);
    return {StateVector(space, std::move(c), r.state.label()), r.residual, r.tail_weight};
  }
  const auto& coh = std::get<preset::Coherent>(p);
  EmbeddingReport r = embed_state(preset::Coherent{coh.z * std::polar(1.0, -omega * t)}, space);
  Eigen::VectorXcd c = r.state.coefficients() * std::polar(1.0, -0.5 * quantum * t);
  return {StateVector(space, std::move(c), r.state.label()), r.residual, r.tail_weight};
}

struct FaithfulnessDynamicsReport {
  std::size_t dim = 0;
  std::vector<double> times;
  std::vector<double> deviations;  // ||U_t phi - V_t phi_N|| in L2
  double max_deviation = 0.0;
  double initial_residual = 0.0;
};

/// ||U_t phi - V_t phi_N|| over a time grid, for the oscillator matched to the space.
///
/// phi_N is the renormalized embedding of phi. The L2 distance splits into the
/// part inside the space, ||P_N U_t phi - V_t phi_N||, computed numerically,
/// and the part outside, ||(1 - P_N) U_t phi||, which is the closed-form tail
/// of the reference state. Since P_N U_t phi = sqrt(1 - tail) ref_N(t), the
/// inside part is ref_N - V_t phi_N - (tail / (1 + sqrt(1 - tail))) ref_N.
inline FaithfulnessDynamicsReport dynamics_deviation(const ReferencePreset& p, const TruncatedSpace& space,
                                                     const std::vector<double>& time_grid) {
  if (!std::is_sorted(time_grid.begin(), time_grid.end())) throw ConfigError("time grid must be sorted");
  for (double t : time_grid)
    if (!std::isfinite(t)) throw ConfigError("time grid entries must be finite");
  const auto h = std::make_shared<const SpectralDecomposition>(diagonalize(oscillator_hamiltonian(space)));
  const EmbeddingReport initial = embed_state(to_state_preset(p), space);

  FaithfulnessDynamicsReport rep;
  rep.dim = space.dim();
  rep.times = time_grid;
  rep.initial_residual = initial.residual;
  for (double t : time_grid) {
    const EmbeddingReport ref = reference_evolution(p, t, space);
    const StateVector evolved = evolve(initial.state, *h, t);
    const double shrink = ref.tail_weight / (1.0 + std::sqrt(1.0 - ref.tail_weight));
    const Eigen::VectorXcd inside = ref.state.coefficients() - evolved.coefficients() - shrink * ref.state.coefficients();
    const double d = std::hypot(inside.norm(), ref.residual);
    rep.deviations.push_back(d);
    rep.max_deviation = std::max(rep.max_deviation, d);
  }
  return rep;
}

}  // namespace hyperfinite
