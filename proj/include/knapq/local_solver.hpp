#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "knapq/instance.hpp"
#include "knapq/prng.hpp"
#include "knapq/reproducible_quantile.hpp"

namespace knapq {

// Tunables of one solver configuration. Everything here depends only on
// epsilon and the knobs, never on the instance; the run-dependent quantities
// (q, t, a) are recomputed per run and reported in RunRecord.
struct LcaConfig {
  Rational epsilon;
  Rational tau;
  Rational rho;
  Rational beta;
  int domain_bits = 32;
  double rep_constant = 0.0;     // replication term forwarded to required_samples
  double coupon_constant = 6.0;  // leading constant of the large-item sample size
  uint64_t m = 0;                // large-item sample size, |R|
  uint64_t n_rq = 0;             // per-call quantile sample requirement

  // Fills tau, rho, beta with their defaults for eps and calls refresh().
  static LcaConfig derive(const Rational& eps);

  // Recomputes m and n_rq from the current field values. Call after
  // overriding any knob.
  void refresh();

  QuantileParams quantile_params() const;
};

// Item of the reduced instance. Originals carry their index in the source
// instance; bucket representatives carry (bucket, copy) instead.
struct ReducedItem {
  Rational profit;
  Rational weight;
  bool is_rep = false;
  size_t orig_index = 0;
  uint64_t rep_bucket = 0;
  uint64_t rep_copy = 0;

  Rational efficiency() const { return profit / weight; }
};

struct ReducedInstance {
  std::vector<ReducedItem> large;       // deduplicated sampled large items, index ascending
  std::vector<ReducedItem> small_reps;  // (bucket, copy) ascending
  Rational capacity;
};

// Everything observable about one reduction run, for ledgers and reports.
struct RunRecord {
  bool eps_branch = false;  // the threshold stage ran (enough residual small mass)
  uint64_t m = 0;
  uint64_t a = 0;
  uint64_t t = 0;
  uint64_t t_prime = 0;
  Rational q;  // defined when eps_branch
  Rational p_large_sampled;
  uint64_t samples_drawn = 0;
  std::vector<Rational> thresholds;  // decoded, before truncation
};

struct BuildResult {
  ReducedInstance reduced;
  EfficiencySequence seq;  // truncated sequence the representatives were built from
  RunRecord record;
};

// Pluggable threshold estimator. The default is the reproducible quantile;
// tests and generator self-checks substitute the exact rank statistic.
class QuantileEngine {
 public:
  virtual ~QuantileEngine() = default;
  virtual int64_t threshold(const std::vector<int64_t>& codes, const Rational& level,
                            const QuantileParams& params, Stream& shared, Stream& pad,
                            std::pair<int64_t, int64_t> clamp) = 0;
};

class ReproducibleQuantileEngine final : public QuantileEngine {
 public:
  int64_t threshold(const std::vector<int64_t>& codes, const Rational& level,
                    const QuantileParams& params, Stream& shared, Stream& pad,
                    std::pair<int64_t, int64_t> clamp) override {
    return r_quantile(codes, level, params, shared, pad, clamp);
  }
};

// Deterministic empirical quantile, smallest code whose empirical CDF
// reaches the level. Ignores both streams.
class ExactQuantileEngine final : public QuantileEngine {
 public:
  int64_t threshold(const std::vector<int64_t>& codes, const Rational& level,
                    const QuantileParams& params, Stream& shared, Stream& pad,
                    std::pair<int64_t, int64_t> clamp) override;
};

BuildResult build_reduced(const KnapsackInstance& inst, const LcaConfig& cfg,
                          const RandomnessPlan& plan);
BuildResult build_reduced(const KnapsackInstance& inst, const LcaConfig& cfg,
                          const RandomnessPlan& plan, QuantileEngine& engine);

// Output of the greedy conversion. index_large holds original-instance
// indices, ascending. An absent e_small means no small item is admitted.
struct GreedySummary {
  std::vector<size_t> index_large;
  std::optional<Rational> e_small;
  bool b_indicator = false;
  int branch = 1;
  size_t prefix_len = 0;  // j, length of the maximal feasible prefix
  uint64_t k = 0;         // largest threshold index beating item j's efficiency
};

GreedySummary convert_greedy(const ReducedInstance& reduced, const EfficiencySequence& seq);

// The solution set the summary denotes on the original instance, ascending.
std::vector<size_t> mapping_greedy(const GreedySummary& summary, const KnapsackInstance& inst,
                                   const Rational& eps);

// Per-item membership test equivalent to mapping_greedy on the same summary.
bool decide_item(const GreedySummary& summary, const KnapsackInstance& inst, size_t index,
                 const Rational& eps);

std::vector<uint8_t> answer_vector(const GreedySummary& summary, const KnapsackInstance& inst,
                                   const Rational& eps);

struct RunOutput {
  BuildResult build;
  GreedySummary summary;
  std::vector<size_t> solution;
};

RunOutput run_pipeline(const KnapsackInstance& inst, const LcaConfig& cfg,
                       const RandomnessPlan& plan);
RunOutput run_pipeline(const KnapsackInstance& inst, const LcaConfig& cfg,
                       const RandomnessPlan& plan, QuantileEngine& engine);

struct QueryResult {
  bool answer = false;
  uint64_t samples_drawn = 0;
  int branch = 1;
  std::optional<Rational> e_small;
  uint64_t t_prime = 0;
};

// Stateless point query: rebuilds the run from (inst, cfg, plan) and answers
// membership for one index.
QueryResult answer_query(const KnapsackInstance& inst, size_t index, const LcaConfig& cfg,
                         const RandomnessPlan& plan);
QueryResult answer_query(const KnapsackInstance& inst, size_t index, const LcaConfig& cfg,
                         const RandomnessPlan& plan, QuantileEngine& engine);

// View of the reduced instance as a plain instance, for exact solvers.
KnapsackInstance reduced_to_instance(const ReducedInstance& reduced);

}  // namespace knapq
