#include "knapq/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "knapq/sampling.hpp"

namespace knapq {

namespace {

// Smallest c >= 0 with 3^c >= target, an exact ceil(log3).
uint64_t ceil_log3(const Rational& target) {
  uint64_t c = 0;
  Rational pow(1);
  while (pow < target) {
    pow = pow * Rational(3);
    ++c;
  }
  return c;
}

}  // namespace

LcaConfig LcaConfig::derive(const Rational& eps) {
  if (!(eps > Rational(0)) || eps > Rational(1))
    throw std::invalid_argument("lca: epsilon must lie in (0,1]");
  LcaConfig cfg;
  cfg.epsilon = eps;
  const Rational eps2 = eps * eps;
  cfg.tau = eps2 / Rational(5);
  cfg.rho = eps2 / Rational(18);
  cfg.beta = cfg.rho / Rational(2);
  cfg.refresh();
  return cfg;
}

void LcaConfig::refresh() {
  if (!(epsilon > Rational(0)) || epsilon > Rational(1))
    throw std::invalid_argument("lca: epsilon must lie in (0,1]");
  const double inv2 = (Rational(1) / (epsilon * epsilon)).to_double();
  const double base = std::ceil(coupon_constant * inv2 * (std::log(inv2) + 1.0));
  const uint64_t rounds = ceil_log3(Rational(3) / epsilon);
  m = static_cast<uint64_t>(base) * rounds;
  n_rq = QuantileParams::required_samples(tau / Rational(2), beta, rep_constant, rho);
}

QuantileParams LcaConfig::quantile_params() const {
  QuantileParams p;
  p.rho = rho;
  p.tau = tau;
  p.beta = beta;
  p.domain_bits = domain_bits;
  p.n_rq = n_rq;
  return p;
}

int64_t ExactQuantileEngine::threshold(const std::vector<int64_t>& codes, const Rational& level,
                                       const QuantileParams& params, Stream& shared, Stream& pad,
                                       std::pair<int64_t, int64_t> clamp) {
  (void)params;
  (void)shared;
  (void)pad;
  (void)clamp;
  if (codes.empty()) throw std::invalid_argument("quantile: empty sample");
  const BigInt n(static_cast<uint64_t>(codes.size()));
  BigInt rank = (level * Rational(n)).ceil();
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  std::vector<int64_t> work(codes);
  const size_t k = static_cast<size_t>(static_cast<uint64_t>(rank)) - 1;
  std::nth_element(work.begin(), work.begin() + static_cast<ptrdiff_t>(k), work.end());
  return work[k];
}

BuildResult build_reduced(const KnapsackInstance& inst, const LcaConfig& cfg,
                          const RandomnessPlan& plan) {
  ReproducibleQuantileEngine engine;
  return build_reduced(inst, cfg, plan, engine);
}

BuildResult build_reduced(const KnapsackInstance& inst, const LcaConfig& cfg,
                          const RandomnessPlan& plan, QuantileEngine& engine) {
  if (!inst.profits_normalized())
    throw std::invalid_argument("lca: instance profits must be normalized");
  if (cfg.m == 0 || cfg.n_rq == 0) throw std::invalid_argument("lca: config not refreshed");

  const Rational one(1);
  const Rational eps = cfg.epsilon;
  const Rational eps2 = eps * eps;

  BuildResult out;
  out.record.m = cfg.m;
  out.reduced.capacity = inst.capacity();

  Stream run = plan.run_stream();
  SampleAccount account;
  WeightedSampler sampler(inst);

  // Stage 1: sample R and keep the distinct large hits.
  const auto r_draws = sampler.draw_multiset(run, account, cfg.m);
  std::vector<char> seen(inst.size(), 0);
  std::vector<size_t> large_hits;
  Rational p_large(0);
  for (uint32_t idx : r_draws) {
    if (seen[idx]) continue;
    seen[idx] = 1;
    if (inst.item(idx).profit > eps2) {
      large_hits.push_back(idx);
      p_large = p_large + inst.item(idx).profit;
    }
  }
  std::sort(large_hits.begin(), large_hits.end());
  out.record.p_large_sampled = p_large;
  for (size_t idx : large_hits) {
    ReducedItem it;
    it.profit = inst.item(idx).profit;
    it.weight = inst.item(idx).weight;
    it.orig_index = idx;
    out.reduced.large.push_back(std::move(it));
  }

  // Stage 2: threshold estimation, only when enough mass is left over.
  std::vector<Rational> kept_thresholds;
  if (one - p_large >= eps) {
    out.record.eps_branch = true;
    const Rational q = (eps + eps2 / Rational(2)) / (one - p_large);
    out.record.q = q;
    const BigInt t_big = (one / q).floor();
    const uint64_t t = static_cast<uint64_t>(t_big);
    out.record.t = t;

    const Rational a_rat = Rational(BigInt(3) * BigInt(cfg.n_rq)) / (Rational(2) * (one - p_large));
    const uint64_t a = static_cast<uint64_t>(a_rat.ceil());
    out.record.a = a;

    const auto q_draws = sampler.draw_multiset(run, account, a);
    const DiscreteDomain domain = DiscreteDomain::from_instance(inst, cfg.domain_bits);
    std::vector<int64_t> codes;
    codes.reserve(q_draws.size());
    // The draw hits few distinct items many times, so classify and encode
    // each item once.
    constexpr int64_t kUncoded = std::numeric_limits<int64_t>::min();
    std::vector<int64_t> code_memo(inst.size(), kUncoded);
    std::vector<int8_t> large_memo(inst.size(), -1);
    for (uint32_t idx : q_draws) {
      int8_t& lg = large_memo[idx];
      if (lg < 0) lg = inst.item(idx).profit > eps2 ? 1 : 0;
      if (lg != 0) continue;
      int64_t& code = code_memo[idx];
      if (code == kUncoded) code = domain.encode(inst.efficiency(idx));
      codes.push_back(code);
    }

    if (t >= 1 && codes.size() >= cfg.n_rq) {
      const QuantileParams params = cfg.quantile_params();
      const std::pair<int64_t, int64_t> clamp{domain.min_code(), domain.max_code()};
      int64_t prev_code = 0;
      for (uint64_t k = 1; k <= t; ++k) {
        const Rational level = one - Rational(BigInt(k)) * q;
        int64_t code;
        if (level > Rational(0)) {
          Stream shared = plan.shared_stream(k);
          code = engine.threshold(codes, level, params, shared, run, clamp);
        } else {
          // kq == 1 can only happen at k == t; the level-0 quantile is the
          // smallest value in the domain.
          code = domain.min_code();
        }
        if (k > 1 && code > prev_code) code = prev_code;
        prev_code = code;
        out.record.thresholds.push_back(domain.decode(code));
      }
      uint64_t t_prime = t;
      if (out.record.thresholds.back() < eps2) t_prime = t - 1;
      out.record.t_prime = t_prime;
      kept_thresholds.assign(out.record.thresholds.begin(),
                             out.record.thresholds.begin() + static_cast<ptrdiff_t>(t_prime));
    }
    // Too small a filtered sample (or t == 0) degrades to the empty
    // sequence; the run proceeds and may simply be wrong.
  }

  out.seq = EfficiencySequence(kept_thresholds);

  // Stage 3: bucket representatives, floor(1/eps) copies each.
  const uint64_t copies = static_cast<uint64_t>((one / eps).floor());
  for (uint64_t k = 0; k < out.record.t_prime; ++k) {
    const Rational eff = out.seq.at(k + 1);
    const Rational weight = eps2 / eff;
    for (uint64_t c = 0; c < copies; ++c) {
      ReducedItem it;
      it.profit = eps2;
      it.weight = weight;
      it.is_rep = true;
      it.rep_bucket = k;
      it.rep_copy = c;
      out.reduced.small_reps.push_back(std::move(it));
    }
  }

  out.record.samples_drawn = account.samples_drawn;
  return out;
}

GreedySummary convert_greedy(const ReducedInstance& reduced, const EfficiencySequence& seq) {
  struct Entry {
    Rational eff;
    const ReducedItem* item;
  };
  std::vector<Entry> order;
  order.reserve(reduced.large.size() + reduced.small_reps.size());
  for (const auto& it : reduced.large) order.push_back({it.efficiency(), &it});
  for (const auto& it : reduced.small_reps) order.push_back({it.efficiency(), &it});
  std::sort(order.begin(), order.end(), [](const Entry& x, const Entry& y) {
    if (x.eff != y.eff) return y.eff < x.eff;
    if (x.item->is_rep != y.item->is_rep) return !x.item->is_rep;
    if (!x.item->is_rep) return x.item->orig_index < y.item->orig_index;
    return std::tie(x.item->rep_bucket, x.item->rep_copy) <
           std::tie(y.item->rep_bucket, y.item->rep_copy);
  });

  GreedySummary summary;
  Rational prefix_weight(0);
  Rational prefix_profit(0);
  size_t j = 0;
  while (j < order.size()) {
    const Rational next = prefix_weight + order[j].item->weight;
    if (next > reduced.capacity) break;
    prefix_weight = next;
    prefix_profit = prefix_profit + order[j].item->profit;
    ++j;
  }
  summary.prefix_len = j;

  uint64_t k = 0;
  if (j > 0) {
    const Rational& eff_j = order[j - 1].eff;
    for (size_t i = 1; i <= seq.size(); ++i) {
      if (seq.at(i) > eff_j)
        k = i;
      else
        break;
    }
  }
  summary.k = k;

  const bool whole = (j == order.size());
  if (whole || prefix_profit >= order[j].item->profit) {
    summary.branch = 1;
    summary.b_indicator = false;
    for (size_t i = 0; i < j; ++i) {
      if (!order[i].item->is_rep) summary.index_large.push_back(order[i].item->orig_index);
    }
    std::sort(summary.index_large.begin(), summary.index_large.end());
    if (k >= 3) summary.e_small = seq.at(k - 2);
  } else {
    summary.branch = 2;
    summary.b_indicator = true;
    // A representative in this slot denotes no original item; the summary
    // then selects nothing.
    if (!order[j].item->is_rep) summary.index_large.push_back(order[j].item->orig_index);
  }
  return summary;
}

bool decide_item(const GreedySummary& summary, const KnapsackInstance& inst, size_t index,
                 const Rational& eps) {
  const Rational eps2 = eps * eps;
  const Item& it = inst.item(index);
  if (it.profit > eps2) {
    return std::binary_search(summary.index_large.begin(), summary.index_large.end(), index);
  }
  if (!summary.e_small.has_value()) return false;
  if (it.profit.is_zero()) return false;
  const Rational eff = it.profit / it.weight;
  return eff >= eps2 && eff >= *summary.e_small;
}

std::vector<size_t> mapping_greedy(const GreedySummary& summary, const KnapsackInstance& inst,
                                   const Rational& eps) {
  std::vector<size_t> chosen = summary.index_large;
  if (!summary.b_indicator && summary.e_small.has_value()) {
    const Rational eps2 = eps * eps;
    for (size_t i = 0; i < inst.size(); ++i) {
      const Item& it = inst.item(i);
      if (it.profit.is_zero() || it.profit > eps2) continue;
      const Rational eff = it.profit / it.weight;
      if (eff >= eps2 && eff >= *summary.e_small) chosen.push_back(i);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<uint8_t> answer_vector(const GreedySummary& summary, const KnapsackInstance& inst,
                                   const Rational& eps) {
  std::vector<uint8_t> out(inst.size(), 0);
  for (size_t i = 0; i < inst.size(); ++i) out[i] = decide_item(summary, inst, i, eps) ? 1 : 0;
  return out;
}

RunOutput run_pipeline(const KnapsackInstance& inst, const LcaConfig& cfg,
                       const RandomnessPlan& plan) {
  ReproducibleQuantileEngine engine;
  return run_pipeline(inst, cfg, plan, engine);
}

RunOutput run_pipeline(const KnapsackInstance& inst, const LcaConfig& cfg,
                       const RandomnessPlan& plan, QuantileEngine& engine) {
  RunOutput out;
  out.build = build_reduced(inst, cfg, plan, engine);
  out.summary = convert_greedy(out.build.reduced, out.build.seq);
  out.solution = mapping_greedy(out.summary, inst, cfg.epsilon);
  return out;
}

QueryResult answer_query(const KnapsackInstance& inst, size_t index, const LcaConfig& cfg,
                         const RandomnessPlan& plan) {
  ReproducibleQuantileEngine engine;
  return answer_query(inst, index, cfg, plan, engine);
}

QueryResult answer_query(const KnapsackInstance& inst, size_t index, const LcaConfig& cfg,
                         const RandomnessPlan& plan, QuantileEngine& engine) {
  if (index >= inst.size()) throw std::out_of_range("lca: item index out of range");
  const BuildResult build = build_reduced(inst, cfg, plan, engine);
  const GreedySummary summary = convert_greedy(build.reduced, build.seq);
  QueryResult res;
  res.answer = decide_item(summary, inst, index, cfg.epsilon);
  res.samples_drawn = build.record.samples_drawn;
  res.branch = summary.branch;
  res.e_small = summary.e_small;
  res.t_prime = build.record.t_prime;
  return res;
}

KnapsackInstance reduced_to_instance(const ReducedInstance& reduced) {
  std::vector<Item> items;
  items.reserve(reduced.large.size() + reduced.small_reps.size());
  for (const auto& it : reduced.large) items.push_back({it.profit, it.weight});
  for (const auto& it : reduced.small_reps) items.push_back({it.profit, it.weight});
  return KnapsackInstance::from_rationals(std::move(items), reduced.capacity);
}

}  // namespace knapq
