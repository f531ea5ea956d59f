#pragma once

// Frequency law for an observable with (discretized) continuous spectrum:
// along an i.i.d. outcome sequence y of length K drawn from the branch
// measure, the fraction of j with lambda_{y(j)} in a delta-fattened F should
// approach the standard spectral measure of F.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/everett/sampling.hpp"
#include "hyperfinite/operators.hpp"
#include "hyperfinite/statespace.hpp"
#include "hyperfinite/worlds.hpp"

namespace hyperfinite::everett {

struct ContinuousLawRow {
  Interval interval;
  double analytic = 0.0;  // mu^{A, st phi}(F)
  double branch = 0.0;    // branch measure of the fattened F
  std::vector<double> empirical;  // one per sample
  double max_deviation = 0.0;
  double median_deviation = 0.0;
};

struct ContinuousLawReport {
  long long K = 0;
  double delta = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string analytic_name;
  std::vector<ContinuousLawRow> rows;
  double max_deviation = 0.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// One report per K in `Ks`. Every K reads a prefix of the same sequences
/// (drawn once at the largest K), as finite prefixes of one infinite outcome record.
inline std::vector<ContinuousLawReport> continuous_law_sweep(std::shared_ptr<const BranchDecomposition> bd,
                                                             const AnalyticMeasure& mu, std::vector<long long> Ks,
                                                             const std::vector<Interval>& family, double delta,
                                                             std::size_t samples, std::uint64_t seed,
                                                             unsigned threads = 1) {
  if (!bd) throw ConfigError("continuous frequency law without a branch decomposition");
  if (Ks.empty()) throw ConfigError("empty K sweep");
  if (family.empty()) throw ConfigError("empty interval family");
  if (!(delta >= 0.0)) throw ConfigError("fattening delta must be >= 0");
  for (long long K : Ks)
    if (K < 1) throw ConfigError("K must be >= 1, got " + std::to_string(K));
  const long long kmax = *std::max_element(Ks.begin(), Ks.end());
  const auto seqs = sample_branches({kmax, OutcomeModel{bd}}, samples, seed, threads);

  // landing indicator per eigenpair index and interval
  const auto& spec = bd->spectrum();
  std::vector<IntervalSet> fat;
  for (const auto& iv : family) fat.push_back(IntervalSet{iv}.fattened(delta));
  std::vector<std::vector<char>> lands(family.size(), std::vector<char>(static_cast<std::size_t>(spec.size())));
  for (std::size_t f = 0; f < family.size(); ++f)
    for (Eigen::Index i = 0; i < spec.size(); ++i) lands[f][static_cast<std::size_t>(i)] = fat[f].contains(spec.eigenvalue(i));

  std::vector<ContinuousLawReport> out;
  for (long long K : Ks) {
    ContinuousLawReport rep{K, delta, samples, seed, mu.name(), {}, 0.0};
    for (std::size_t f = 0; f < family.size(); ++f) {
      ContinuousLawRow row;
      row.interval = family[f];
      row.analytic = mu.probability(family[f]);
      row.branch = branch_measure(*bd, {IntervalSet{family[f]}, delta});
      std::vector<double> devs;
      for (const auto& s : seqs) {
        std::size_t hits = 0;
        for (long long j = 0; j < K; ++j) hits += lands[f][s[static_cast<std::size_t>(j)]];
        const double e = static_cast<double>(hits) / static_cast<double>(K);
        row.empirical.push_back(e);
        devs.push_back(std::abs(e - row.analytic));
      }
      row.max_deviation = *std::max_element(devs.begin(), devs.end());
      row.median_deviation = median(devs);
      rep.max_deviation = std::max(rep.max_deviation, row.max_deviation);
      rep.rows.push_back(std::move(row));
    }
    out.push_back(std::move(rep));
  }
  return out;
}

inline ContinuousLawReport continuous_frequency_law(std::shared_ptr<const BranchDecomposition> bd,
                                                    const AnalyticMeasure& mu, long long K,
                                                    const std::vector<Interval>& family, double delta,
                                                    std::size_t samples, std::uint64_t seed, unsigned threads = 1) {
  return continuous_law_sweep(std::move(bd), mu, {K}, family, delta, samples, seed, threads).front();
}

/// Standard spectral measure of a preset under an observable, where it has a closed form.
inline AnalyticMeasure analytic_measure_for(const StatePreset& preset, const TruncatedSpace& space, ObservableKind kind) {
  if (kind != ObservableKind::position)
    throw ConfigError(std::string("no analytic spectral measure for observable ") + to_string(kind));
  if (space.family() == BasisFamily::spin) throw ConfigError("no analytic position measure on the spin space");
  return position_measure(preset, space.scale());
}

/// Builds the observable, decomposes the embedded state and runs the law against
/// the closed-form measure of the preset.
inline ContinuousLawReport continuous_frequency_law(const StatePreset& preset, const TruncatedSpace& space,
                                                    ObservableKind kind, const std::optional<PotentialSpec>& potential,
                                                    long long K, const std::vector<Interval>& family, double delta,
                                                    std::size_t samples, std::uint64_t seed, unsigned threads = 1) {
  const AnalyticMeasure mu = analytic_measure_for(preset, space, kind);
  auto spec = std::make_shared<const SpectralDecomposition>(diagonalize(natural_extension(kind, space, potential)));
  auto bd = std::make_shared<const BranchDecomposition>(decompose(embed_state(preset, space).state, spec));
  return continuous_frequency_law(bd, mu, K, family, delta, samples, seed, threads);
}

}  // namespace hyperfinite::everett
