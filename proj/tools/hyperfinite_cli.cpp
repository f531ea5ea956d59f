// hyperfinite: command-line front end. Every run writes result tables plus the
// resolved config.json into the output directory.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperfinite/hyperfinite.hpp"
#include "output.hpp"
#include "run_config.hpp"

#ifndef HYPERFINITE_VERSION
#define HYPERFINITE_VERSION "0.0.0"
#endif

namespace hf = hyperfinite;
namespace ev = hyperfinite::everett;
using namespace hfcli;

namespace {

// ---- config -> library objects

hf::TruncatedSpace space_from(const RunConfig& c, long long dim) {
  hf::SpaceSpec s;
  const std::string family = c.string("family");
  if (family == "hermite")
    s.family = hf::BasisFamily::hermite;
  else if (family == "grid")
    s.family = hf::BasisFamily::grid;
  else
    throw ConfigError("family must be 'hermite' or 'grid' (got '" + family + "')");
  s.dim = dim;
  s.scale = c.real("scale");
  s.extent = c.real("extent");
  s.constants.hbar = c.real("constants.hbar");
  s.constants.mass = c.real("constants.mass");
  const std::string kin = c.string("constants.kinetic");
  if (kin == "standard")
    s.constants.kinetic = hf::KineticConvention::standard;
  else if (kin == "literal")
    s.constants.kinetic = hf::KineticConvention::literal;
  else
    throw ConfigError("constants.kinetic must be 'standard' or 'literal' (got '" + kin + "')");
  return hf::build_space(s);
}

hf::ObservableKind observable_kind(const RunConfig& c) {
  static const std::map<std::string, hf::ObservableKind> names = {
      {"X", hf::ObservableKind::position},    {"position", hf::ObservableKind::position},
      {"P", hf::ObservableKind::momentum},    {"momentum", hf::ObservableKind::momentum},
      {"T", hf::ObservableKind::kinetic},     {"kinetic", hf::ObservableKind::kinetic},
      {"V", hf::ObservableKind::potential},   {"potential", hf::ObservableKind::potential},
      {"H", hf::ObservableKind::hamiltonian}, {"hamiltonian", hf::ObservableKind::hamiltonian},
  };
  const std::string k = c.string("observable.kind");
  auto it = names.find(k);
  if (it == names.end()) throw ConfigError("observable.kind must be one of X, P, T, V, H (got '" + k + "')");
  return it->second;
}

// An empty potential means the oscillator matched to the space.
hf::Polynomial potential_from(const RunConfig& c, const hf::TruncatedSpace& space) {
  const auto coeffs = c.reals("observable.potential");
  if (coeffs.empty()) return hf::oscillator_potential(space);
  return hf::Polynomial{coeffs};
}

bool is_matched_oscillator(const hf::Polynomial& v, const hf::TruncatedSpace& space) {
  auto trim = [](std::vector<double> a) {
    while (!a.empty() && a.back() == 0.0) a.pop_back();
    return a;
  };
  return trim(v.coefficients) == trim(hf::oscillator_potential(space).coefficients);
}

hf::ObservableMatrix observable_from(const RunConfig& c, const hf::TruncatedSpace& space) {
  const auto kind = observable_kind(c);
  std::optional<hf::PotentialSpec> v;
  if (kind == hf::ObservableKind::potential || kind == hf::ObservableKind::hamiltonian)
    v = hf::PotentialSpec{potential_from(c, space)};
  return hf::natural_extension(kind, space, v);
}

std::string preset_kind(const RunConfig& c) { return c.string("preset.kind"); }

hf::StatePreset state_preset(const RunConfig& c) {
  const std::string k = preset_kind(c);
  if (k == "ho-ground") return hf::preset::HoEigenstate{0};
  if (k == "ho" || k == "ho-eigenstate") {
    const long long n = c.integer("preset.n");
    if (n < 0) throw ConfigError("preset.n must be >= 0");
    return hf::preset::HoEigenstate{static_cast<std::size_t>(n)};
  }
  if (k == "coherent") return hf::preset::Coherent{c.complex("preset.z")};
  if (k == "gaussian") return hf::preset::Gaussian{c.real("preset.center"), c.real("preset.width")};
  if (k == "custom") return hf::preset::Custom{c.complexes("preset.coefficients")};
  throw ConfigError("preset.kind '" + k + "' is not a state preset (ho, ho-ground, ho-eigenstate, coherent, gaussian, custom)");
}

std::optional<hf::ReferencePreset> reference_preset(const hf::StatePreset& p) {
  if (const auto* e = std::get_if<hf::preset::HoEigenstate>(&p)) return hf::ReferencePreset{*e};
  if (const auto* z = std::get_if<hf::preset::Coherent>(&p)) return hf::ReferencePreset{*z};
  return std::nullopt;
}

unsigned thread_count(const RunConfig& c) {
  const long long t = c.integer("threads");
  if (t < 0) throw ConfigError("threads must be >= 0");
  return static_cast<unsigned>(t);
}

std::size_t positive_size(const RunConfig& c, const std::string& field) {
  const long long v = c.integer(field);
  if (v < 1) throw ConfigError(field + " must be >= 1 (got " + std::to_string(v) + ")");
  return static_cast<std::size_t>(v);
}

std::string interval_name(const hf::Interval& iv) { return "[" + format_real(iv.lo) + "," + format_real(iv.hi) + "]"; }

hf::Interval window_from(const RunConfig& c) {
  const auto w = c.reals("window");
  if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("window must be [lo, hi] with lo < hi");
  return {w[0], w[1]};
}

// ---- commands

struct Outcome {
  std::vector<Table> tables;
};

Outcome run_spectrum(const RunConfig& c) {
  const auto space = space_from(c, c.integer("dim"));
  const auto spec = hf::diagonalize(observable_from(c, space));
  Table t{"spectrum", {"index", "eigenvalue", "gap_below", "gap_above"}, {}};
  const auto n = spec.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = spec.eigenvalue(i);
    const double below = i > 0 ? lam - spec.eigenvalue(i - 1) : std::nan("");
    const double above = i + 1 < n ? spec.eigenvalue(i + 1) - lam : std::nan("");
    t.add({static_cast<long long>(i), lam, below, above});
  }
  return {{t}};
}

Outcome run_branch(const RunConfig& c) {
  const std::string k = preset_kind(c);
  std::optional<hf::BranchDecomposition> bd;
  if (k == "spin") {
    bd = hf::spin_measurement_preset(c.complex("preset.alpha"), c.complex("preset.beta"));
  } else {
    const auto space = space_from(c, c.integer("dim"));
    auto spec = std::make_shared<const hf::SpectralDecomposition>(hf::diagonalize(observable_from(c, space)));
    if (k == "eigenvector") {
      const long long i = c.integer("preset.index");
      if (i < 0 || i >= spec->size())
        throw ConfigError("preset.index must be in [0, " + std::to_string(spec->size() - 1) + "]");
      bd = hf::decompose(spec->eigenvector(i), spec);
    } else {
      bd = hf::decompose(hf::embed_state(state_preset(c), space).state, spec);
    }
  }
  Table worlds{"branch", {"world", "index", "outcome", "weight", "label"}, {}};
  for (std::size_t w = 0; w < bd->size(); ++w) {
    const auto& x = bd->worlds()[w];
    worlds.add({static_cast<long long>(w), static_cast<long long>(x.index), x.outcome, x.weight, x.label});
  }
  const auto win = window_from(c);
  Table summary{"branch_summary", {"worlds", "total_weight", "tiny_weight_count", "window_lo", "window_hi", "outside_window_weight"}, {}};
  summary.add({static_cast<long long>(bd->size()), bd->total_weight(), static_cast<long long>(bd->tiny_weight_count()), win.lo,
               win.hi, bd->weight_outside(win.lo, win.hi)});
  return {{worlds, summary}};
}

Outcome run_evolve(const RunConfig& c) {
  const auto space = space_from(c, c.integer("dim"));
  const auto p = state_preset(c);
  const auto kind = observable_kind(c);
  if (kind != hf::ObservableKind::hamiltonian && kind != hf::ObservableKind::potential && kind != hf::ObservableKind::kinetic)
    throw ConfigError("evolve needs observable.kind H, V or T");
  const auto hop = observable_from(c, space);
  const auto h = hf::diagonalize(hop);
  const auto x = hf::natural_extension(hf::ObservableKind::position, space);
  const auto initial = hf::embed_state(p, space);
  const auto times = c.times();

  std::optional<hf::FaithfulnessDynamicsReport> dev;
  const auto ref = reference_preset(p);
  if (ref && kind == hf::ObservableKind::hamiltonian && is_matched_oscillator(potential_from(c, space), space) &&
      std::is_sorted(times.begin(), times.end()))
    dev = hf::dynamics_deviation(*ref, space, times);

  Table t{"evolve", {"t", "norm", "energy", "position_mean", "reference_deviation"}, {}};
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto s = hf::evolve(initial.state, h, times[k]);
    t.add({times[k], s.norm(), hop.expectation(s), x.expectation(s), dev ? dev->deviations[k] : std::nan("")});
  }
  return {{t}};
}

Outcome run_faithfulness(const RunConfig& c) {
  const auto p = state_preset(c);
  const auto ref = reference_preset(p);
  std::optional<hf::AnalyticMeasure> mu;
  try {
    mu = hf::position_measure(p, c.real("scale"));
  } catch (const ConfigError&) {
    if (!ref) throw ConfigError("faithfulness needs a closed-form preset (ho, coherent or gaussian)");
  }
  const auto dims = c.integers("dims");
  const auto times = c.times();
  const auto family = c.intervals();
  const double delta = c.real("delta");
  const auto win = window_from(c);

  Table summary{"faithfulness",
                {"dim", "dynamics_max_deviation", "initial_residual", "measure_sup_deviation", "measure_sup_endpoint_bound",
                 "endpoint_warnings", "outside_window_weight", "tiny_weight_count"},
                {}};
  Table rows{"faithfulness_intervals",
             {"dim", "lo", "hi", "branch", "analytic", "deviation", "endpoint_bound", "endpoint_warning"},
             {}};
  for (long long n : dims) {
    const auto space = space_from(c, n);
    double dyn = std::nan(""), residual = hf::embed_state(p, space).residual;
    if (ref) dyn = hf::dynamics_deviation(*ref, space, times).max_deviation;
    double sup = std::nan(""), bound = std::nan(""), outside = std::nan("");
    long long warnings = 0, tiny = 0;
    if (mu) {
      auto spec = std::make_shared<const hf::SpectralDecomposition>(
          hf::diagonalize(hf::natural_extension(hf::ObservableKind::position, space)));
      const auto bd = hf::decompose(hf::embed_state(p, space).state, spec);
      const auto rep = hf::faithfulness_measure_report(bd, *mu, family, delta, win);
      sup = rep.sup_deviation;
      bound = rep.sup_endpoint_bound;
      outside = rep.outside_window_weight;
      tiny = static_cast<long long>(rep.tiny_weight_count);
      for (const auto& r : rep.rows) {
        rows.add({n, r.interval.lo, r.interval.hi, r.branch, r.analytic, r.deviation, r.endpoint_bound,
                  static_cast<long long>(r.endpoint_warning)});
        if (r.endpoint_warning) {
          ++warnings;
          std::cerr << fmt::format("warning: dim={} interval {} has an endpoint within a quarter gap of an eigenvalue; "
                                   "deviation {} is dominated by a single boundary node (bound {})\n",
                                   n, interval_name(r.interval), format_real(r.deviation), format_real(r.endpoint_bound));
        }
      }
    }
    summary.add({n, dyn, residual, sup, bound, warnings, outside, tiny});
  }
  return {{summary, rows}};
}

Outcome run_frequency_law(const RunConfig& c) {
  const double p = c.real("p"), eps = c.real("eps");
  const bool brute = c.boolean("brute_force");
  Table t{"frequency_law", {"K", "p", "eps", "measure", "method", "i_min", "i_max"}, {}};
  auto add = [&](const ev::FrequencyLawReport& r) {
    t.add({r.K, r.p, r.eps, r.measure, std::string(ev::to_string(r.method)), r.i_min, r.i_max});
  };
  for (long long K : c.integers("K")) {
    add(ev::frequency_law_measure(K, p, eps));
    if (brute && K <= ev::kBruteForceMaxK) add(ev::brute_force_frequency_law(static_cast<int>(K), p, eps));
  }
  return {{t}};
}

Outcome run_randomness(const RunConfig& c) {
  const std::string k = preset_kind(c);
  const std::size_t length = positive_size(c, "length");
  const double p = c.real("p"), significance = c.real("significance");
  std::vector<ev::OutcomeSequence> seqs;
  if (k == "bernoulli") {
    seqs = ev::sample_branches({static_cast<long long>(length), ev::BernoulliModel{p}}, positive_size(c, "samples"),
                               c.unsigned_integer("seed"), thread_count(c));
  } else if (k == "all-zeros") {
    seqs = {ev::counterexample::all_zeros(length)};
  } else if (k == "all-ones") {
    seqs = {ev::counterexample::all_ones(length)};
  } else if (k == "alternating") {
    seqs = {ev::counterexample::alternating(length)};
  } else if (k == "periodic") {
    seqs = {ev::counterexample::periodic_blocks(length, positive_size(c, "preset.period"))};
  } else {
    throw ConfigError("preset.kind '" + k + "' is not a sequence preset (bernoulli, all-zeros, all-ones, alternating, periodic)");
  }

  Table per{"randomness", {"sequence", "test", "statistic", "p_value", "verdict"}, {}};
  Table entropy{"randomness_entropy", {"sequence", "ones", "entropy_rate", "model_entropy", "all_pass"}, {}};
  std::vector<long long> rejections;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < seqs.size(); ++s) {
    const auto r = ev::randomness_battery(seqs[s], p, significance);
    if (names.empty()) {
      for (const auto& t : r.tests) names.push_back(t.name);
      rejections.assign(names.size(), 0);
    }
    for (std::size_t i = 0; i < r.tests.size(); ++i) {
      const auto& t = r.tests[i];
      per.add({static_cast<long long>(s), t.name, t.statistic, t.p_value, std::string(t.pass ? "pass" : "fail")});
      rejections[i] += !t.pass;
    }
    entropy.add({static_cast<long long>(s), static_cast<long long>(ev::count_ones(seqs[s])), r.entropy_rate, r.model_entropy,
                 static_cast<long long>(r.all_pass())});
  }
  Table summary{"randomness_summary", {"test", "sequences", "rejections", "rejection_rate", "significance"}, {}};
  for (std::size_t i = 0; i < names.size(); ++i)
    summary.add({names[i], static_cast<long long>(seqs.size()), rejections[i],
                 static_cast<double>(rejections[i]) / static_cast<double>(seqs.size()), significance});
  return {{per, summary, entropy}};
}

Outcome run_continuous_law(const RunConfig& c) {
  const auto space = space_from(c, c.integer("dim"));
  const auto p = state_preset(c);
  const auto kind = observable_kind(c);
  const auto mu = ev::analytic_measure_for(p, space, kind);
  auto spec = std::make_shared<const hf::SpectralDecomposition>(hf::diagonalize(hf::natural_extension(kind, space)));
  auto bd = std::make_shared<const hf::BranchDecomposition>(hf::decompose(hf::embed_state(p, space).state, spec));
  const auto reps = ev::continuous_law_sweep(bd, mu, c.integers("K"), c.intervals(), c.real("delta"),
                                             positive_size(c, "samples"), c.unsigned_integer("seed"), thread_count(c));
  Table t{"continuous_law", {"K", "lo", "hi", "analytic", "branch", "max_deviation", "median_deviation"}, {}};
  Table s{"continuous_samples", {"K", "lo", "hi", "sample", "empirical"}, {}};
  for (const auto& r : reps)
    for (const auto& row : r.rows) {
      t.add({r.K, row.interval.lo, row.interval.hi, row.analytic, row.branch, row.max_deviation, row.median_deviation});
      for (std::size_t j = 0; j < row.empirical.size(); ++j)
        s.add({r.K, row.interval.lo, row.interval.hi, static_cast<long long>(j), row.empirical[j]});
    }
  return {{t, s}};
}

Outcome run_nsa_demo(const RunConfig& c) {
  namespace nsa = hf::nsa;
  const long long d = c.integer("nsa_depth");
  if (d < 1) throw ConfigError("nsa_depth must be >= 1");
  const auto depth = static_cast<std::size_t>(d);
  const nsa::AsymptoticScalar w = nsa::AsymptoticScalar::omega();
  const nsa::AsymptoticScalar one(1);
  const std::vector<std::pair<std::string, nsa::AsymptoticScalar>> scalars = {
      {"w", w},
      {"1/w", nsa::inverse(w, depth)},
      {"3 + 5/w", 3 + 5 * nsa::inverse(w, depth)},
      {"w^2/7", nsa::AsymptoticScalar::omega(2, nsa::Rational(1, 7))},
      {"(w + 1)/(2w)", nsa::divide(w + one, 2 * w, depth)},
      {"1/(w - 1)", nsa::inverse(w - one, depth)},
      {"-2 + w^-3", nsa::AsymptoticScalar(-2) + nsa::AsymptoticScalar::omega(-3)},
      {"(w - 3) - w", (w - 3) - w},
  };
  Table t{"nsa_scalars", {"expression", "value", "magnitude", "sign", "standard_part", "standard_part_real", "truncated"}, {}};
  for (const auto& [name, x] : scalars) {
    const auto cls = nsa::classify(x);
    std::string st = "undefined";
    double st_real = std::nan("");
    if (cls.magnitude != nsa::Magnitude::infinite) {
      st = nsa::standard_part(x).str();
      st_real = nsa::standard_part_real(x);
    }
    t.add({name, x.to_string(), std::string(nsa::to_string(cls.magnitude)), static_cast<long long>(cls.sign), st, st_real,
           static_cast<long long>(x.truncated())});
  }
  const std::vector<std::tuple<std::string, nsa::AsymptoticScalar, nsa::AsymptoticScalar>> counts = {
      {"w/2 of w", nsa::AsymptoticScalar::omega(1, nsa::Rational(1, 2)), w},
      {"1 of w", one, w},
      {"w - 3 of w", w - 3, w},
      {"w^2/3 + w of w^2", nsa::AsymptoticScalar::omega(2, nsa::Rational(1, 3)) + w, nsa::AsymptoticScalar::omega(2)},
  };
  Table m{"nsa_counting", {"case", "subset", "set", "value", "loeb_value"}, {}};
  for (const auto& [name, sub, set] : counts) {
    const auto r = nsa::counting_measure(sub, set, depth);
    m.add({name, sub.to_string(), set.to_string(), r.value.to_string(), r.loeb_value.value_or(std::nan(""))});
  }
  return {{t, m}};
}

// ---- flags

struct FlagSpec {
  const char* name;
  const char* path;
  FlagKind kind;
  const char* help;
};

const std::vector<FlagSpec> kSpaceFlags = {
    {"family", "family", FlagKind::text, "basis family: hermite | grid"},
    {"dim", "dim", FlagKind::integer, "truncation dimension N"},
    {"scale", "scale", FlagKind::real, "oscillator length s"},
    {"extent", "extent", FlagKind::real, "grid extent L"},
    {"hbar", "constants.hbar", FlagKind::real, "hbar"},
    {"mass", "constants.mass", FlagKind::real, "particle mass"},
    {"kinetic", "constants.kinetic", FlagKind::text, "kinetic prefactor: standard (hbar^2/2m) | literal (hbar/2m)"},
};
const std::vector<FlagSpec> kPresetFlags = {
    {"preset", "preset.kind", FlagKind::text, "preset kind"},
    {"n", "preset.n", FlagKind::integer, "oscillator level"},
    {"index", "preset.index", FlagKind::integer, "eigenvector index"},
    {"z", "preset.z", FlagKind::complex, "coherent amplitude re[,im]"},
    {"center", "preset.center", FlagKind::real, "gaussian center"},
    {"width", "preset.width", FlagKind::real, "gaussian width"},
    {"coefficients", "preset.coefficients", FlagKind::reals, "custom coefficients c0,c1,..."},
    {"alpha", "preset.alpha", FlagKind::complex, "spin alpha re[,im]"},
    {"beta", "preset.beta", FlagKind::complex, "spin beta re[,im]"},
};
const std::vector<FlagSpec> kObservableFlags = {
    {"observable", "observable.kind", FlagKind::text, "X | P | T | V | H"},
    {"potential", "observable.potential", FlagKind::reals, "polynomial potential c0,c1,... (default: matched oscillator)"},
};
const FlagSpec kSeedFlag{"seed", "seed", FlagKind::integer, "RNG seed"};
const FlagSpec kThreadsFlag{"threads", "threads", FlagKind::integer, "worker threads (0: hardware)"};

struct CommandSpec {
  const char* name;
  const char* help;
  Outcome (*run)(const RunConfig&);
  bool seeded;
  std::vector<FlagSpec> flags;
};

std::vector<FlagSpec> join(std::initializer_list<std::vector<FlagSpec>> parts) {
  std::vector<FlagSpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<CommandSpec> commands() {
  const FlagSpec window{"window", "window", FlagKind::reals, "weight-accounting window lo,hi"};
  const FlagSpec intervals{"intervals", "intervals", FlagKind::intervals, "standard | lo:hi,lo:hi,..."};
  const FlagSpec delta{"delta", "delta", FlagKind::real, "fattening of the target intervals"};
  return {
      {"spectrum", "eigenvalues of an observable", run_spectrum, false, join({kSpaceFlags, kObservableFlags})},
      {"branch", "branch decomposition of a state", run_branch, false,
       join({kSpaceFlags, kPresetFlags, kObservableFlags, {window}})},
      {"evolve", "time evolution under H", run_evolve, false,
       join({kSpaceFlags, kPresetFlags, kObservableFlags,
             {{"times", "times", FlagKind::times, "start:step:stop or t0,t1,..."}}})},
      {"faithfulness", "dynamics and measure faithfulness over a dimension sweep", run_faithfulness, false,
       join({kSpaceFlags, kPresetFlags,
             {{"dims", "dims", FlagKind::integers, "dimensions N1,N2,..."},
              {"times", "times", FlagKind::times, "start:step:stop or t0,t1,..."},
              intervals, delta, window}})},
      {"frequency-law", "measure of the frequency-typical worlds", run_frequency_law, false,
       {{"K", "K", FlagKind::integers, "repetitions K (or K1,K2,...)"},
        {"p", "p", FlagKind::real, "single-trial weight"},
        {"eps", "eps", FlagKind::real, "frequency tolerance"}}},
      {"randomness", "finite randomness battery on branch sequences", run_randomness, true,
       join({{{"preset", "preset.kind", FlagKind::text, "bernoulli | all-zeros | all-ones | alternating | periodic"},
              {"period", "preset.period", FlagKind::integer, "block period for the periodic preset"},
              {"length", "length", FlagKind::integer, "sequence length"},
              {"samples", "samples", FlagKind::integer, "number of sampled sequences"},
              {"p", "p", FlagKind::real, "null Bernoulli parameter"},
              {"significance", "significance", FlagKind::real, "per-test significance level"},
              kSeedFlag, kThreadsFlag}})},
      {"continuous-law", "empirical frequencies against the analytic spectral measure", run_continuous_law, true,
       join({kSpaceFlags, kPresetFlags,
             {{"observable", "observable.kind", FlagKind::text, "X"},
              {"K", "K", FlagKind::integers, "repetitions K (or K1,K2,...)"},
              {"samples", "samples", FlagKind::integer, "sampled sequences per K"},
              intervals, delta, kSeedFlag, kThreadsFlag}})},
      {"nsa-demo", "asymptotic scalar arithmetic and counting measures", run_nsa_demo, false,
       {{"nsa-depth", "nsa_depth", FlagKind::integer, "inversion depth"}}},
  };
}

std::filesystem::path output_dir(const std::string& flag, const json& file) {
  if (!flag.empty()) return flag;
  if (file.contains("output_dir")) {
    if (!file["output_dir"].is_string()) throw ConfigError("config field 'output_dir' must be a string");
    return file["output_dir"].get<std::string>();
  }
  if (const char* env = std::getenv("HYPERFINITE_OUTPUT_DIR"); env && *env) return env;
  return "hyperfinite-out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperfinite: truncated-space quantum mechanics and branch-frequency experiments"};
  app.set_version_flag("--version", std::string(HYPERFINITE_VERSION));
  app.require_subcommand(1);

  const auto specs = commands();
  struct Bound {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config, outdir, format;
    bool brute_force = false;
    CLI::Option* brute_opt = nullptr;
    CLI::Option* format_opt = nullptr;
  };
  std::vector<Bound> bound(specs.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto* sub = app.add_subcommand(specs[i].name, specs[i].help);
    auto& b = bound[i];
    sub->add_option("--config", b.config, "JSON config file");
    sub->add_option("--output-dir", b.outdir, "output directory");
    b.format_opt = sub->add_option("--format", b.format, "csv | json");
    for (const auto& f : specs[i].flags) b.options[f.name] = sub->add_option(std::string("--") + f.name, b.values[f.name], f.help);
    if (std::string(specs[i].name) == "frequency-law")
      b.brute_opt = sub->add_flag("--brute-force", b.brute_force, "also enumerate all 2^K worlds for K <= 20");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const auto& spec = specs[which];
  const auto& b = bound[which];

  try {
    json doc = default_config(spec.name);
    json file = json::object();
    if (!b.config.empty()) {
      file = read_config_file(b.config);
      json patch = file;
      patch.erase("output_dir");
      doc.merge_patch(patch);
    }
    for (const auto& f : spec.flags) {
      if (b.options.at(f.name)->count() == 0) continue;
      doc[pointer(f.path)] = parse_flag(f.name, f.kind, b.values.at(f.name));
    }
    if (b.format_opt->count()) doc["format"] = b.format;
    if (b.brute_opt && b.brute_opt->count()) doc["brute_force"] = b.brute_force;

    const RunConfig cfg(spec.name, doc);
    const std::string format = cfg.string("format");
    if (format != "csv" && format != "json") throw ConfigError("format must be 'csv' or 'json' (got '" + format + "')");

    const std::string dumped = doc.dump(2);
    RunMeta meta{HYPERFINITE_VERSION, spec.name, fmt::format("fnv1a64:{:016x}", fnv1a(dumped)),
                 spec.seeded ? cfg.unsigned_integer("seed") : 0};

    const Outcome out = spec.run(cfg);

    const auto dir = output_dir(b.outdir, file);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    for (const auto& t : out.tables) std::cout << write_table(dir, t, meta, format).string() << "\n";
    write_file(dir / "config.json", dumped + "\n");
    std::cout << (dir / "config.json").string() << "\n";
    return 0;
  } catch (const hf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const hf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hf::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hf::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
