#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "knapq/instance.hpp"
#include "knapq/prng.hpp"
#include "knapq/sampling.hpp"

namespace knapq {

enum class HardFamily { or_optimal, or_approx, maximal_pair };

// Recipe for one adversarial instance. The OR families read n, the bit
// vector x (length n-1), and beta for the approximate variant; the
// paired-heavy family reads n, the index pair, and the second heavy weight.
// Fields that a caller wants drawn at random are filled from `seed` by the
// draw helpers below.
struct HardInstanceSpec {
  HardFamily family = HardFamily::or_optimal;
  size_t n = 0;
  std::vector<uint8_t> x;
  Rational beta;
  size_t pair_i = 0;
  size_t pair_j = 0;
  Rational weight_j;
  std::array<uint8_t, 32> seed{};
};

// Fills pair_i, pair_j (distinct, uniform) and weight_j (1/4 or 3/4,
// equiprobable) from spec.seed; nonce separates independent draws.
void draw_pair(HardInstanceSpec& spec, uint64_t nonce);

// Fills x with n-1 uniform bits from spec.seed.
void draw_bits(HardInstanceSpec& spec, uint64_t nonce);

KnapsackInstance generate(const HardInstanceSpec& spec);

// All inclusion-maximal feasible selections, each as an ascending index
// list. Exhaustive over subsets; n <= 20.
std::vector<std::vector<uint32_t>> maximal_solutions(const KnapsackInstance& inst);

// Public parameters of a membership query. Only the weights are hidden
// behind the probe oracle; n, the capacity, and the probe budget are known
// to the strategy.
struct QueryContext {
  size_t n = 0;
  Rational capacity;
  size_t index = 0;
  uint64_t budget = 0;
};

// One membership answer per probe-limited query. The rng replays the same
// bytes for every query of a trial, modelling a shared random seed; a
// strategy keeps no state across queries.
class ProbeStrategy {
 public:
  virtual ~ProbeStrategy() = default;
  virtual bool member(const QueryContext& query, BudgetedProbe& probe, Stream& rng) = 0;
};

// Says yes to everything without probing.
class AlwaysYesStrategy final : public ProbeStrategy {
 public:
  bool member(const QueryContext& query, BudgetedProbe& probe, Stream& rng) override;
};

// Probes every item in index order and reports membership in the greedy
// prefix solution (admit whatever still fits). Unprobed items count as
// weightless, so an undersized budget degrades toward yes.
class ScanAllStrategy final : public ProbeStrategy {
 public:
  bool member(const QueryContext& query, BudgetedProbe& probe, Stream& rng) override;
};

// Probes its own item, then random items until the budget runs out. Light
// items get yes outright; a heavy item gets no only when an earlier heavy
// item shows up among the probes, otherwise the answer defaults to yes.
class RandomProbeStrategy final : public ProbeStrategy {
 public:
  bool member(const QueryContext& query, BudgetedProbe& probe, Stream& rng) override;
};

// Whether a (yes_i, yes_j) answer pair embeds in some maximal feasible
// solution of a paired-heavy instance; heavy_j tells which case was drawn.
bool pair_answers_consistent(bool heavy_j, bool yes_i, bool yes_j);

struct AdversaryReport {
  uint64_t trials = 0;
  uint64_t errors = 0;
  uint64_t budget_exceeded = 0;
  uint64_t total_probes = 0;
  double error_rate = 0.0;
  double mean_probes = 0.0;  // per query; every trial issues two queries
};

// Plays `trials` independent rounds of the two-query game against the
// strategy: draw a fresh paired-heavy instance, query s_i then s_j with a
// fresh budget each, and count the trial as an error when the answers fit
// no maximal solution. Running past the probe budget is recorded, not
// fatal. If `account` is given, every probe is also tallied there.
AdversaryReport run_adversary(ProbeStrategy& strategy, HardFamily family, size_t n,
                              uint64_t trials, uint64_t probe_budget,
                              const std::array<uint8_t, 32>& seed,
                              SampleAccount* account = nullptr);

}  // namespace knapq
