#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knapq/rational.hpp"

namespace knapq {

struct Item {
  Rational profit;
  Rational weight;
};

// Integer view of an instance: profits in units of 1/profit_denom, weights and
// capacity in units of 1/weight_denom. Present whenever the common grids fit
// in int64; the samplers and the DP solver run on it. profit_total is the sum
// of profit units, which equals profit_denom exactly when the profits sum to 1.
struct RawGrid {
  std::vector<int64_t> profit_units;
  std::vector<int64_t> weight_units;
  int64_t profit_total = 0;
  int64_t profit_denom = 1;
  int64_t weight_denom = 1;
  int64_t capacity_units = 0;
};

class KnapsackInstance {
 public:
  struct Options {
    // Set for adversarial fixtures whose profits are all zero and whose
    // weights may be zero; only feasibility questions make sense there.
    bool feasibility_only = false;
  };

  // Builds a profit-normalized instance from integer data. Weights and the
  // capacity keep their scale (units of 1/weight_denom); profits are divided
  // by their total.
  static KnapsackInstance normalize(const std::vector<std::pair<int64_t, int64_t>>& raw,
                                    int64_t capacity_units, int64_t weight_denom = 1) {
    if (raw.empty()) throw std::invalid_argument("instance: no items");
    if (capacity_units < 1) throw std::invalid_argument("instance: capacity must be >= 1");
    if (weight_denom < 1) throw std::invalid_argument("instance: weight_denom must be >= 1");
    BigInt total = 0;
    for (const auto& [p, w] : raw) {
      if (p < 0) throw std::invalid_argument("instance: negative profit");
      if (w < 1) throw std::invalid_argument("instance: weight must be >= 1");
      if (w > capacity_units) throw std::invalid_argument("instance: weight exceeds capacity");
      total += p;
    }
    if (total == 0) throw std::invalid_argument("instance: zero total profit");

    KnapsackInstance inst;
    inst.items_.reserve(raw.size());
    for (const auto& [p, w] : raw) {
      inst.items_.push_back(Item{Rational(BigInt(p), total), Rational(BigInt(w), BigInt(weight_denom))});
    }
    inst.capacity_ = Rational(BigInt(capacity_units), BigInt(weight_denom));
    inst.profits_normalized_ = true;
    RawGrid grid;
    grid.profit_units.reserve(raw.size());
    grid.weight_units.reserve(raw.size());
    for (const auto& [p, w] : raw) {
      grid.profit_units.push_back(p);
      grid.weight_units.push_back(w);
    }
    if (total > BigInt(INT64_MAX)) throw std::invalid_argument("instance: profit total overflows");
    grid.profit_total = static_cast<int64_t>(total);
    grid.profit_denom = grid.profit_total;  // units are pre-normalization profits
    grid.weight_denom = weight_denom;
    grid.capacity_units = capacity_units;
    inst.raw_ = std::move(grid);
    return inst;
  }

  // Direct construction from exact rationals (fixtures, hard families,
  // reduced instances). Profits need not sum to 1 here; items heavier than
  // the capacity are admitted and simply belong to no feasible solution.
  static KnapsackInstance from_rationals(std::vector<Item> items, Rational capacity) {
    return from_rationals(std::move(items), std::move(capacity), Options());
  }

  static KnapsackInstance from_rationals(std::vector<Item> items, Rational capacity,
                                         Options opt) {
    if (items.empty()) throw std::invalid_argument("instance: no items");
    if (!(capacity > Rational(0))) throw std::invalid_argument("instance: capacity must be positive");
    Rational total(0);
    for (const auto& it : items) {
      if (it.profit.is_negative()) throw std::invalid_argument("instance: negative profit");
      if (it.weight.is_negative()) throw std::invalid_argument("instance: negative weight");
      if (!opt.feasibility_only && it.weight.is_zero())
        throw std::invalid_argument("instance: zero weight");
      total += it.profit;
    }
    KnapsackInstance inst;
    inst.items_ = std::move(items);
    inst.capacity_ = std::move(capacity);
    inst.profits_normalized_ = (total == Rational(1));
    inst.feasibility_only_ = opt.feasibility_only;
    inst.derive_raw_grid();
    return inst;
  }

  size_t size() const { return items_.size(); }
  const Item& item(size_t i) const { return items_.at(i); }
  const std::vector<Item>& items() const { return items_; }
  const Rational& capacity() const { return capacity_; }
  bool profits_normalized() const { return profits_normalized_; }
  bool feasibility_only() const { return feasibility_only_; }
  const std::optional<RawGrid>& raw_grid() const { return raw_; }

  Rational efficiency(size_t i) const {
    const Item& it = items_.at(i);
    if (it.weight.is_zero()) throw std::invalid_argument("instance: efficiency of zero-weight item");
    return it.profit / it.weight;
  }

 private:
  void derive_raw_grid() {
    // Common denominators; bail out to the exact-only representation if the
    // scaled entries would overflow int64.
    const BigInt limit = BigInt(INT64_MAX);
    BigInt pden = 1, wden = 1;
    for (const auto& it : items_) {
      pden = boost::multiprecision::lcm(pden, it.profit.den());
      if (pden > limit) return;
      if (!it.weight.is_zero()) {
        wden = boost::multiprecision::lcm(wden, it.weight.den());
        if (wden > limit) return;
      }
    }
    wden = boost::multiprecision::lcm(wden, capacity_.den());
    if (wden > limit) return;
    RawGrid grid;
    BigInt ptotal = 0;
    for (const auto& it : items_) {
      BigInt pu = it.profit.num() * (pden / it.profit.den());
      BigInt wu = it.weight.num() * (wden / it.weight.den());
      if (pu > limit || wu > limit) return;
      grid.profit_units.push_back(static_cast<int64_t>(pu));
      grid.weight_units.push_back(static_cast<int64_t>(wu));
      ptotal += pu;
    }
    BigInt cap = capacity_.num() * (wden / capacity_.den());
    if (ptotal > limit || cap > limit) return;
    grid.profit_total = static_cast<int64_t>(ptotal);
    grid.profit_denom = static_cast<int64_t>(pden);
    grid.weight_denom = static_cast<int64_t>(wden);
    grid.capacity_units = static_cast<int64_t>(cap);
    raw_ = std::move(grid);
  }

  std::vector<Item> items_;
  Rational capacity_;
  bool profits_normalized_ = false;
  bool feasibility_only_ = false;
  std::optional<RawGrid> raw_;
};

enum class ItemClass : uint8_t { Large = 0, Small = 1, Garbage = 2 };

// Classification of every item at a fixed epsilon:
//   Large:   profit >  eps^2
//   Small:   profit <= eps^2 and profit/weight >= eps^2
//   Garbage: profit <= eps^2 and profit/weight <  eps^2
struct PartitionTable {
  Rational eps;
  Rational eps_sq;
  std::vector<ItemClass> cls;
  std::vector<int32_t> large;
  std::vector<int32_t> small;
  std::vector<int32_t> garbage;
  Rational large_profit;
};

inline PartitionTable partition(const KnapsackInstance& inst, const Rational& eps) {
  if (!inst.profits_normalized())
    throw std::invalid_argument("partition: requires a profit-normalized instance");
  if (!(eps > Rational(0)) || eps > Rational(1))
    throw std::invalid_argument("partition: eps must lie in (0,1]");
  PartitionTable t;
  t.eps = eps;
  t.eps_sq = eps * eps;
  t.cls.resize(inst.size());
  t.large_profit = Rational(0);
  for (size_t i = 0; i < inst.size(); ++i) {
    const Item& it = inst.item(i);
    if (it.profit > t.eps_sq) {
      t.cls[i] = ItemClass::Large;
      t.large.push_back(static_cast<int32_t>(i));
      t.large_profit += it.profit;
    } else if (it.profit >= t.eps_sq * it.weight) {
      t.cls[i] = ItemClass::Small;
      t.small.push_back(static_cast<int32_t>(i));
    } else {
      t.cls[i] = ItemClass::Garbage;
      t.garbage.push_back(static_cast<int32_t>(i));
    }
  }
  return t;
}

// Non-increasing efficiency thresholds e_1 >= ... >= e_t (possibly empty).
class EfficiencySequence {
 public:
  EfficiencySequence() = default;
  explicit EfficiencySequence(std::vector<Rational> thresholds) {
    for (size_t i = 1; i < thresholds.size(); ++i) {
      if (thresholds[i] > thresholds[i - 1])
        throw std::invalid_argument("efficiency sequence: thresholds must be non-increasing");
    }
    thresholds_ = std::move(thresholds);
  }

  size_t size() const { return thresholds_.size(); }
  bool empty() const { return thresholds_.empty(); }
  // 1-indexed to match the usual threshold numbering e_1..e_t.
  const Rational& at(size_t k) const {
    if (k < 1 || k > thresholds_.size()) throw std::out_of_range("efficiency sequence index");
    return thresholds_[k - 1];
  }
  const std::vector<Rational>& values() const { return thresholds_; }

 private:
  std::vector<Rational> thresholds_;
};

// Buckets over the Small items only:
//   A_0 = {eff >= e_1}, A_k = {e_k > eff >= e_(k+1)}, A_t = {eff < e_t}.
// An empty sequence yields a single bucket holding all of S, treated as the
// tail bucket by the EPS check.
inline std::vector<std::vector<int32_t>> bucketize(const KnapsackInstance& inst,
                                                   const PartitionTable& part,
                                                   const EfficiencySequence& seq) {
  size_t t = seq.size();
  std::vector<std::vector<int32_t>> buckets(t + 1);
  for (int32_t idx : part.small) {
    Rational eff = inst.efficiency(static_cast<size_t>(idx));
    if (t == 0) {
      buckets[0].push_back(idx);
      continue;
    }
    if (eff >= seq.at(1)) {
      buckets[0].push_back(idx);
      continue;
    }
    size_t k = t;  // falls through to the tail when below e_t
    for (size_t j = 2; j <= t; ++j) {
      if (eff >= seq.at(j)) {
        k = j - 1;
        break;
      }
    }
    buckets[k].push_back(idx);
  }
  return buckets;
}

struct EpsCheckResult {
  bool ok = false;
  std::vector<Rational> bucket_profits;  // size t+1, tail last
};

// Verifies the equal-partition property: every leading bucket's profit lies in
// [eps, eps + eps^2) and the tail bucket's in [0, eps + eps^2).
inline EpsCheckResult check_eps_sequence(const KnapsackInstance& inst, const PartitionTable& part,
                                         const EfficiencySequence& seq) {
  auto buckets = bucketize(inst, part, seq);
  EpsCheckResult res;
  res.bucket_profits.reserve(buckets.size());
  for (const auto& b : buckets) {
    Rational sum(0);
    for (int32_t idx : b) sum += inst.item(static_cast<size_t>(idx)).profit;
    res.bucket_profits.push_back(sum);
  }
  Rational hi = part.eps + part.eps_sq;
  res.ok = true;
  size_t t = seq.size();
  for (size_t k = 0; k < t; ++k) {
    if (res.bucket_profits[k] < part.eps || res.bucket_profits[k] >= hi) {
      res.ok = false;
      return res;
    }
  }
  if (res.bucket_profits[t] >= hi) res.ok = false;
  return res;
}

}  // namespace knapq
