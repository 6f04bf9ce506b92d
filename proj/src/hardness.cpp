#include "knapq/hardness.hpp"

#include <stdexcept>
#include <string>

namespace knapq {

namespace {

constexpr const char* kDrawLabel = "hardness";
constexpr const char* kStrategyLabel = "strategy";

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("hardness: ") + what);
}

}  // namespace

void draw_pair(HardInstanceSpec& spec, uint64_t nonce) {
  require(spec.family == HardFamily::maximal_pair, "draw_pair needs the paired-heavy family");
  require(spec.n >= 2, "paired-heavy family needs n >= 2");
  Stream draw(spec.seed, kDrawLabel, nonce);
  spec.pair_i = static_cast<size_t>(draw.uniform_below(spec.n));
  size_t j = static_cast<size_t>(draw.uniform_below(spec.n - 1));
  if (j >= spec.pair_i) ++j;
  spec.pair_j = j;
  spec.weight_j = draw.next_bit() ? Rational::ratio(3, 4) : Rational::ratio(1, 4);
}

void draw_bits(HardInstanceSpec& spec, uint64_t nonce) {
  require(spec.family == HardFamily::or_optimal || spec.family == HardFamily::or_approx,
          "draw_bits needs an OR family");
  require(spec.n >= 1, "OR family needs n >= 1");
  Stream draw(spec.seed, kDrawLabel, nonce);
  spec.x.assign(spec.n - 1, 0);
  for (auto& bit : spec.x) bit = draw.next_bit() ? 1 : 0;
}

KnapsackInstance generate(const HardInstanceSpec& spec) {
  switch (spec.family) {
    case HardFamily::or_optimal:
    case HardFamily::or_approx: {
      require(spec.n >= 1, "OR family needs n >= 1");
      require(spec.x.size() == spec.n - 1, "bit vector must have n - 1 entries");
      for (uint8_t bit : spec.x) require(bit <= 1, "bit vector entries must be 0 or 1");
      Rational last = Rational::ratio(1, 2);
      if (spec.family == HardFamily::or_approx) {
        require(spec.beta > Rational(0) && spec.beta < Rational(1), "beta must lie in (0, 1)");
        last = spec.beta;
      }
      // Every item weighs exactly the capacity, so feasible solutions are
      // the singletons and the empty set.
      std::vector<Item> items;
      items.reserve(spec.n);
      for (uint8_t bit : spec.x) items.push_back(Item{Rational(bit), Rational(1)});
      items.push_back(Item{last, Rational(1)});
      return KnapsackInstance::from_rationals(std::move(items), Rational(1));
    }
    case HardFamily::maximal_pair: {
      require(spec.n >= 2, "paired-heavy family needs n >= 2");
      require(spec.pair_i < spec.n && spec.pair_j < spec.n, "pair indices out of range");
      require(spec.pair_i != spec.pair_j, "pair indices must differ");
      require(spec.weight_j == Rational::ratio(1, 4) || spec.weight_j == Rational::ratio(3, 4),
              "second weight must be 1/4 or 3/4");
      std::vector<Item> items(spec.n, Item{Rational(0), Rational(0)});
      items[spec.pair_i].weight = Rational::ratio(3, 4);
      items[spec.pair_j].weight = spec.weight_j;
      KnapsackInstance::Options opt;
      opt.feasibility_only = true;
      return KnapsackInstance::from_rationals(std::move(items), Rational(1), opt);
    }
  }
  throw std::invalid_argument("hardness: unknown family");
}

std::vector<std::vector<uint32_t>> maximal_solutions(const KnapsackInstance& inst) {
  const size_t n = inst.size();
  if (n > 20) throw std::length_error("maximal_solutions: instance too large to enumerate");
  std::vector<std::vector<uint32_t>> out;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    Rational weight(0);
    bool feasible = true;
    for (size_t k = 0; k < n && feasible; ++k) {
      if (mask >> k & 1u) {
        weight += inst.item(k).weight;
        feasible = weight <= inst.capacity();
      }
    }
    if (!feasible) continue;
    bool maximal = true;
    for (size_t k = 0; k < n && maximal; ++k) {
      if (!(mask >> k & 1u)) maximal = weight + inst.item(k).weight > inst.capacity();
    }
    if (!maximal) continue;
    std::vector<uint32_t> chosen;
    for (size_t k = 0; k < n; ++k) {
      if (mask >> k & 1u) chosen.push_back(static_cast<uint32_t>(k));
    }
    out.push_back(std::move(chosen));
  }
  return out;
}

bool AlwaysYesStrategy::member(const QueryContext&, BudgetedProbe&, Stream&) { return true; }

bool ScanAllStrategy::member(const QueryContext& query, BudgetedProbe& probe, Stream&) {
  Rational used(0);
  bool in = false;
  for (size_t k = 0; k < query.n; ++k) {
    Rational w(0);
    if (auto item = probe.probe(k)) w = item->weight;
    if (used + w <= query.capacity) {
      used += w;
      if (k == query.index) in = true;
    }
  }
  return in;
}

bool RandomProbeStrategy::member(const QueryContext& query, BudgetedProbe& probe, Stream& rng) {
  const auto own = probe.probe(query.index);
  if (!own) return true;
  // Two heavy items cannot coexist within the capacity.
  const auto heavy = [&](const Rational& w) { return w + w > query.capacity; };
  if (!heavy(own->weight)) return true;
  while (probe.used() < query.budget) {
    const size_t r = static_cast<size_t>(rng.uniform_below(query.n));
    const auto item = probe.probe(r);
    if (!item) return true;
    if (r < query.index && heavy(item->weight)) return false;
  }
  return true;
}

bool pair_answers_consistent(bool heavy_j, bool yes_i, bool yes_j) {
  // One heavy item: the unique maximal solution holds everything. Two heavy
  // items: the maximal solutions each drop exactly one of the pair.
  return heavy_j ? (yes_i != yes_j) : (yes_i && yes_j);
}

AdversaryReport run_adversary(ProbeStrategy& strategy, HardFamily family, size_t n,
                              uint64_t trials, uint64_t probe_budget,
                              const std::array<uint8_t, 32>& seed, SampleAccount* account) {
  require(family == HardFamily::maximal_pair, "only the paired-heavy family is playable");
  require(n >= 2, "paired-heavy family needs n >= 2");

  AdversaryReport report;
  report.trials = trials;
  SampleAccount local;
  SampleAccount& tally = account ? *account : local;

  HardInstanceSpec spec;
  spec.family = HardFamily::maximal_pair;
  spec.n = n;
  spec.seed = seed;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    draw_pair(spec, trial);
    const KnapsackInstance inst = generate(spec);
    const bool heavy_j = spec.weight_j == Rational::ratio(3, 4);

    const size_t queried[2] = {spec.pair_i, spec.pair_j};
    bool answers[2] = {false, false};
    for (int q = 0; q < 2; ++q) {
      BudgetedProbe probe(inst, probe_budget, tally);
      Stream rng(seed, kStrategyLabel, trial);
      answers[q] = strategy.member(QueryContext{n, inst.capacity(), queried[q], probe_budget},
                                   probe, rng);
      report.total_probes += probe.used();
      if (probe.exceeded()) ++report.budget_exceeded;
    }
    if (!pair_answers_consistent(heavy_j, answers[0], answers[1])) ++report.errors;
  }

  if (trials > 0) {
    report.error_rate = static_cast<double>(report.errors) / static_cast<double>(trials);
    report.mean_probes =
        static_cast<double>(report.total_probes) / static_cast<double>(2 * trials);
  }
  return report;
}

}  // namespace knapq
