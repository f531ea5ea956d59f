#pragma once

// Seeded i.i.d. outcome sequences for K repeated measurements. Each sequence
// has its own generator seeded from (master seed, sequence index), so results
// do not depend on the thread count.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "hyperfinite/errors.hpp"
#include "hyperfinite/worlds.hpp"

namespace hyperfinite::everett {

struct BernoulliModel {
  double p = 0.5;  // |alpha|^2
};

using OutcomeModel = std::variant<BernoulliModel, std::shared_ptr<const BranchDecomposition>>;

struct RepeatedExperiment {
  long long K = 1;
  OutcomeModel model;

  void validate() const {
    if (K < 1) throw ConfigError("K must be >= 1, got " + std::to_string(K));
    if (const auto* b = std::get_if<BernoulliModel>(&model)) {
      if (!(b->p >= 0.0 && b->p <= 1.0)) throw ConfigError("p must lie in [0, 1], got " + std::to_string(b->p));
    } else if (!std::get<std::shared_ptr<const BranchDecomposition>>(model)) {
      throw ConfigError("experiment without a branch decomposition");
    }
  }
};

/// Bits (0/1) for the Bernoulli model, eigenpair indices otherwise.
using OutcomeSequence = std::vector<std::uint32_t>;

/// Generator for sequence `index` under `seed`.
inline std::mt19937_64 sequence_generator(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform on [0, 1) with 53 random bits; the standard distributions are not
/// specified bit-for-bit, so they are avoided.
inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

/// Inverse-CDF table over the worlds in outcome order.
class CategoricalTable {
 public:
  explicit CategoricalTable(const BranchDecomposition& bd) {
    double acc = 0.0;
    for (const auto& w : bd.worlds()) {
      acc += w.weight;
      cumulative_.push_back(acc);
      index_.push_back(static_cast<std::uint32_t>(w.index));
    }
    if (!(acc > 0.0)) throw NumericalError("branch weights sum to zero");
  }

  std::uint32_t draw(std::mt19937_64& g) const {
    const double u = uniform01(g) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return index_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<double> cumulative_;
  std::vector<std::uint32_t> index_;
};

/// `count` sequences of length K. `threads` (0 = hardware concurrency) only
/// changes the speed.
inline std::vector<OutcomeSequence> sample_branches(const RepeatedExperiment& ex, std::size_t count, std::uint64_t seed,
                                                    unsigned threads = 1) {
  ex.validate();
  if (count < 1) throw ConfigError("sample count must be >= 1");
  std::vector<OutcomeSequence> out(count);
  const auto K = static_cast<std::size_t>(ex.K);

  std::unique_ptr<CategoricalTable> table;
  double p = 0.0;
  if (const auto* b = std::get_if<BernoulliModel>(&ex.model))
    p = b->p;
  else
    table = std::make_unique<CategoricalTable>(*std::get<std::shared_ptr<const BranchDecomposition>>(ex.model));

  auto fill = [&](std::size_t j) {
    auto g = sequence_generator(seed, j);
    OutcomeSequence& s = out[j];
    s.resize(K);
    if (table)
      for (auto& v : s) v = table->draw(g);
    else
      for (auto& v : s) v = uniform01(g) < p ? 1u : 0u;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t j = 0; j < count; ++j) fill(j);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t j = t; j < count; j += threads) fill(j);
      });
  }
  return out;
}

inline std::size_t count_ones(const OutcomeSequence& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1u));
}

}  // namespace hyperfinite::everett
