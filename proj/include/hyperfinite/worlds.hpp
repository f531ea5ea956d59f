#pragma once

// Worlds as eigenbranches of an observable: |phi> = sum_i alpha_i |psi_i>,
// world i carrying outcome lambda_i and weight |alpha_i|^2.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/hermite.hpp"
#include "hyperfinite/operators.hpp"
#include "hyperfinite/statespace.hpp"

namespace hyperfinite {

/// Weights below this are the finite-N image of infinitesimal branch weights:
/// they are kept and counted, never dropped.
inline constexpr double kTinyWeight = 1e-30;

struct World {
  Eigen::Index index = 0;  // eigenpair index
  double outcome = 0.0;
  double weight = 0.0;
  std::string label;
};

class BranchDecomposition {
 public:
  BranchDecomposition(std::vector<World> worlds, StateVector source, std::shared_ptr<const SpectralDecomposition> spec)
      : worlds_(std::move(worlds)), source_(std::move(source)), spec_(std::move(spec)) {}

  const std::vector<World>& worlds() const { return worlds_; }
  const StateVector& source() const { return source_; }
  const SpectralDecomposition& spectrum() const { return *spec_; }
  std::size_t size() const { return worlds_.size(); }

  StateVector relative_state(std::size_t i) const { return spec_->eigenvector(worlds_.at(i).index); }

  double total_weight() const {
    double s = 0.0;
    for (const auto& w : worlds_) s += w.weight;
    return s;
  }
  std::size_t tiny_weight_count() const {
    return static_cast<std::size_t>(
        std::count_if(worlds_.begin(), worlds_.end(), [](const World& w) { return w.weight < kTinyWeight; }));
  }
  /// Weight of worlds with outcome outside [lo, hi].
  double weight_outside(double lo, double hi) const {
    double s = 0.0;
    for (const auto& w : worlds_)
      if (w.outcome < lo || w.outcome > hi) s += w.weight;
    return s;
  }

 private:
  std::vector<World> worlds_;
  StateVector source_;
  std::shared_ptr<const SpectralDecomposition> spec_;
};

/// alpha_i = <psi_i | phi>, worlds sorted by outcome ascending.
inline BranchDecomposition decompose(const StateVector& state, std::shared_ptr<const SpectralDecomposition> spec,
                                     const std::vector<std::string>& labels = {}) {
  require_same_space(state.space(), spec->space(), "decompose");
  if (!state.flagged_normalized() || std::abs(state.norm() - 1.0) > kNormTolerance)
    throw UsageError("decompose: state '" + state.label() + "' is not normalized");
  const Eigen::VectorXcd alpha = spec->to_eigenbasis(state.coefficients());
  std::vector<World> worlds;
  worlds.reserve(static_cast<std::size_t>(alpha.size()));
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    World w{i, spec->eigenvalue(i), std::norm(alpha[i]), {}};
    if (static_cast<std::size_t>(i) < labels.size()) w.label = labels[static_cast<std::size_t>(i)];
    worlds.push_back(std::move(w));
  }
  std::stable_sort(worlds.begin(), worlds.end(), [](const World& a, const World& b) { return a.outcome < b.outcome; });
  BranchDecomposition bd(std::move(worlds), state, std::move(spec));
  const double total = bd.total_weight();
  if (std::abs(total - 1.0) > kNormTolerance)
    throw NumericalError("branch weights sum to " + std::to_string(total));
  return bd;
}

inline BranchDecomposition decompose(const StateVector& state, const SpectralDecomposition& spec) {
  return decompose(state, std::make_shared<const SpectralDecomposition>(spec));
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval whole_line() {
  return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

/// Finite union of closed intervals, sorted and merged.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts) : IntervalSet(std::vector<Interval>(parts)) {}
  explicit IntervalSet(std::vector<Interval> parts) {
    for (const auto& p : parts) {
      if (std::isnan(p.lo) || std::isnan(p.hi) || p.lo > p.hi)
        throw ConfigError("invalid interval [" + std::to_string(p.lo) + ", " + std::to_string(p.hi) + "]");
    }
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& p : parts) {
      if (!parts_.empty() && p.lo <= parts_.back().hi)
        parts_.back().hi = std::max(parts_.back().hi, p.hi);
      else
        parts_.push_back(p);
    }
  }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double x) const {
    return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& i) { return i.contains(x); });
  }

  /// { x : dist(x, set) <= delta }
  IntervalSet fattened(double delta) const {
    if (!(delta >= 0.0)) throw ConfigError("fattening delta must be >= 0");
    std::vector<Interval> f;
    f.reserve(parts_.size());
    for (const auto& p : parts_) f.push_back({p.lo - delta, p.hi + delta});
    return IntervalSet(std::move(f));
  }

  IntervalSet united(const IntervalSet& other) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
  }

 private:
  std::vector<Interval> parts_;
};

struct BranchMeasureQuery {
  IntervalSet target;
  double delta = 0.0;  // finite-N stand-in for the 1/m fattening of st^-1(E)
};

using ExactSum = boost::multiprecision::cpp_rational;

/// Sum of weights of worlds whose outcome lies in the delta-fattened target,
/// accumulated exactly (every double is a dyadic rational).
inline ExactSum branch_measure_exact(const BranchDecomposition& bd, const BranchMeasureQuery& q) {
  const IntervalSet fat = q.target.fattened(q.delta);
  ExactSum acc = 0;
  for (const auto& w : bd.worlds())
    if (fat.contains(w.outcome) && w.weight != 0.0) acc += ExactSum(w.weight);
  return acc;
}

/// mu^{A_H, phi}(F), correctly rounded.
inline double branch_measure(const BranchDecomposition& bd, const BranchMeasureQuery& q) {
  return branch_measure_exact(bd, q).convert_to<double>();
}

/// Closed-form spectral measure of a standard state under the position observable.
class AnalyticMeasure {
 public:
  struct Gaussian {
    double mean = 0.0;
    double sigma = 1.0;
  };
  struct OscillatorEigenDensity {
    std::size_t n = 0;
    double scale = 1.0;
  };
  struct Discrete {
    std::vector<double> points;
    std::vector<double> weights;
  };
  using Kind = std::variant<Gaussian, OscillatorEigenDensity, Discrete>;

  explicit AnalyticMeasure(Kind kind, std::string name) : kind_(std::move(kind)), name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const Kind& kind() const { return kind_; }

  /// mu([lo, hi])
  double probability(const Interval& iv) const {
    if (const auto* g = std::get_if<Gaussian>(&kind_)) {
      const double s = g->sigma * std::numbers::sqrt2;
      return 0.5 * (std::erf((iv.hi - g->mean) / s) - std::erf((iv.lo - g->mean) / s));
    }
    if (const auto* d = std::get_if<Discrete>(&kind_)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d->points.size(); ++i)
        if (iv.contains(d->points[i])) acc += d->weights[i];
      return acc;
    }
    const auto& e = std::get<OscillatorEigenDensity>(kind_);
    // |phi_n|^2 is negligible beyond the classical turning point by a wide margin.
    const double reach = e.scale * (std::sqrt(2.0 * static_cast<double>(e.n) + 1.0) + 12.0);
    const double lo = std::max(iv.lo, -reach), hi = std::min(iv.hi, reach);
    if (!(lo < hi)) return 0.0;
    auto density = [&](double x) {
      const double v = hermite::function(e.n, x / e.scale);
      return v * v / e.scale;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, lo, hi, 15, 1e-14);
  }

  double probability(const IntervalSet& s) const {
    double acc = 0.0;
    for (const auto& iv : s.parts()) acc += probability(iv);
    return acc;
  }

 private:
  Kind kind_;
  std::string name_;
};

/// Position-space density |phi(x)|^2 of a closed-form preset.
inline AnalyticMeasure position_measure(const StatePreset& p, double scale = 1.0) {
  if (const auto* e = std::get_if<preset::HoEigenstate>(&p)) {
    if (e->n == 0) return AnalyticMeasure(AnalyticMeasure::Gaussian{0.0, scale / std::numbers::sqrt2}, describe(p));
    return AnalyticMeasure(AnalyticMeasure::OscillatorEigenDensity{e->n, scale}, describe(p));
  }
  if (const auto* c = std::get_if<preset::Coherent>(&p))
    return AnalyticMeasure(AnalyticMeasure::Gaussian{std::numbers::sqrt2 * c->z.real() * scale, scale / std::numbers::sqrt2},
                           describe(p));
  if (const auto* g = std::get_if<preset::Gaussian>(&p))
    return AnalyticMeasure(AnalyticMeasure::Gaussian{g->center, g->width / std::numbers::sqrt2}, describe(p));
  throw ConfigError("no analytic position measure for preset '" + describe(p) + "'");
}

/// Point masses at the outcomes of a decomposition: the exact measure of a finite system.
inline AnalyticMeasure discrete_measure(const BranchDecomposition& bd, std::string name) {
  AnalyticMeasure::Discrete d;
  for (const auto& w : bd.worlds()) {
    d.points.push_back(w.outcome);
    d.weights.push_back(w.weight);
  }
  return AnalyticMeasure(std::move(d), std::move(name));
}

struct IntervalDeviation {
  Interval interval;
  double branch = 0.0;
  double analytic = 0.0;
  double deviation = 0.0;
  /// Sum over the finite endpoints of the larger weight of the two worlds
  /// bracketing the endpoint. For Gauss-type spectral measures (ground state
  /// under X) this bounds the deviation, by the Markov-Stieltjes inequalities.
  double endpoint_bound = 0.0;
  /// An endpoint is closer to an eigenvalue than a quarter of the local gap,
  /// i.e. it sits in the half of that gap nearest the eigenvalues.
  bool endpoint_warning = false;
};

struct MeasureFaithfulnessReport {
  std::size_t dim = 0;
  double delta = 0.0;
  std::string analytic_name;
  std::vector<IntervalDeviation> rows;
  double sup_deviation = 0.0;
  double sup_endpoint_bound = 0.0;
  double outside_window_weight = 0.0;
  std::size_t tiny_weight_count = 0;
};

namespace detail {

struct EndpointInfo {
  double bound = 0.0;
  bool warn = false;
};

inline EndpointInfo endpoint_info(const BranchDecomposition& bd, double e) {
  const auto& ws = bd.worlds();
  if (!std::isfinite(e) || ws.empty()) return {};
  auto it = std::lower_bound(ws.begin(), ws.end(), e, [](const World& w, double x) { return w.outcome < x; });
  double below_w = 0.0, above_w = 0.0;
  double below_x = -std::numeric_limits<double>::infinity(), above_x = std::numeric_limits<double>::infinity();
  if (it != ws.end()) {
    above_w = it->weight;
    above_x = it->outcome;
  }
  if (it != ws.begin()) {
    below_w = std::prev(it)->weight;
    below_x = std::prev(it)->outcome;
  }
  EndpointInfo info{std::max(below_w, above_w), false};
  if (std::isfinite(below_x) && std::isfinite(above_x)) {
    const double gap = above_x - below_x;
    info.warn = std::min(e - below_x, above_x - e) < 0.25 * gap;
  }
  return info;
}

}  // namespace detail

/// Per-interval |branch measure - analytic measure| for the delta-fattened intervals.
inline MeasureFaithfulnessReport faithfulness_measure_report(const BranchDecomposition& bd, const AnalyticMeasure& mu,
                                                             const std::vector<Interval>& intervals, double delta,
                                                             Interval window = {-10.0, 10.0}) {
  if (!(delta >= 0.0)) throw ConfigError("fattening delta must be >= 0");
  MeasureFaithfulnessReport rep;
  rep.dim = bd.size();
  rep.delta = delta;
  rep.analytic_name = mu.name();
  rep.outside_window_weight = bd.weight_outside(window.lo, window.hi);
  rep.tiny_weight_count = bd.tiny_weight_count();
  for (const auto& iv : intervals) {
    IntervalDeviation row;
    row.interval = iv;
    row.branch = branch_measure(bd, {IntervalSet{iv}, delta});
    row.analytic = mu.probability(iv);
    row.deviation = std::abs(row.branch - row.analytic);
    for (double e : {iv.lo - delta, iv.hi + delta}) {
      const auto info = detail::endpoint_info(bd, e);
      row.endpoint_bound += info.bound;
      row.endpoint_warning = row.endpoint_warning || info.warn;
    }
    rep.sup_deviation = std::max(rep.sup_deviation, row.deviation);
    rep.sup_endpoint_bound = std::max(rep.sup_endpoint_bound, row.endpoint_bound);
    rep.rows.push_back(row);
  }
  return rep;
}

/// {[-k/2, k/2] : k = 1..6}
inline std::vector<Interval> standard_interval_family() {
  std::vector<Interval> f;
  for (int k = 1; k <= 6; ++k) f.push_back({-0.5 * k, 0.5 * k});
  return f;
}

inline constexpr const char* kUpRecord = "up_x-record";
inline constexpr const char* kDownRecord = "down_x-record";

/// Post-measurement state alpha |"up"> |up> + beta |"down"> |down> of an
/// ideal x-spin measurement, decomposed against the record observable
/// (+1 on the "up" record, -1 on the "down" record).
///
/// The ideal measurement maps |ready>|up> and |ready>|down> to the two
/// record-correlated products, so by linearity the superposition keeps its
/// amplitudes on the record basis.
inline BranchDecomposition spin_measurement_preset(Complex alpha, Complex beta) {
  const double total = std::norm(alpha) + std::norm(beta);
  if (std::abs(total - 1.0) > 1e-12)
    throw UsageError("spin preset: |alpha|^2 + |beta|^2 = " + std::to_string(total) + ", expected 1");
  const TruncatedSpace space = spin_record_space();
  Eigen::MatrixXcd pre(2, 2);  // columns: |ready>|up>, |ready>|down>  ->  record basis
  pre << 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXcd object(2);
  object << alpha, beta;
  StateVector post(space, pre * object, "post-measurement");

  Eigen::MatrixXcd record(2, 2);
  record << 1.0, 0.0, 0.0, -1.0;
  auto spec = std::make_shared<const SpectralDecomposition>(diagonalize(custom_observable(space, record, "record")));
  // eigenvalue order: -1 (down record, basis 1), +1 (up record, basis 0)
  std::vector<std::string> labels(2);
  const auto& perm = *spec->basis_permutation();
  for (std::size_t i = 0; i < 2; ++i) labels[i] = perm[i] == 0 ? kUpRecord : kDownRecord;
  return decompose(post, spec, labels);
}

}  // namespace hyperfinite
