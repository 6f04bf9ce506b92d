#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "knapq/instance.hpp"
#include "knapq/prng.hpp"

namespace knapq {

// Per-run ledger of oracle traffic. samples_drawn counts weighted draws,
// point_probes counts direct item lookups.
struct SampleAccount {
  uint64_t samples_drawn = 0;
  uint64_t point_probes = 0;
};

// Draws item indices with probability exactly equal to each item's profit.
// Uses integer prefix sums over the instance's raw profit grid when it fits
// in int64, otherwise exact big-integer prefixes.
class WeightedSampler {
 public:
  explicit WeightedSampler(const KnapsackInstance& inst) {
    if (!inst.profits_normalized())
      throw std::invalid_argument("sampler: requires a profit-normalized instance");
    if (inst.raw_grid().has_value()) {
      const RawGrid& g = *inst.raw_grid();
      prefix_.reserve(g.profit_units.size());
      int64_t acc = 0;
      for (int64_t p : g.profit_units) {
        acc += p;
        prefix_.push_back(acc);
      }
      total_ = static_cast<uint64_t>(g.profit_total);
    } else {
      // Common denominator of all profits; cumulative numerators on that grid.
      BigInt den = 1;
      for (const auto& it : inst.items()) den = boost::multiprecision::lcm(den, it.profit.den());
      BigInt acc = 0;
      big_prefix_.reserve(inst.size());
      for (const auto& it : inst.items()) {
        acc += it.profit.num() * (den / it.profit.den());
        big_prefix_.push_back(acc);
      }
      big_total_ = den;
    }
  }

  uint32_t draw(Stream& stream, SampleAccount& account) const {
    ++account.samples_drawn;
    if (!prefix_.empty()) {
      uint64_t u = stream.uniform_below(total_);
      auto it = std::upper_bound(prefix_.begin(), prefix_.end(), static_cast<int64_t>(u));
      return static_cast<uint32_t>(it - prefix_.begin());
    }
    BigInt u = stream.uniform_below_big(big_total_);
    size_t lo = 0, hi = big_prefix_.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (big_prefix_[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    return static_cast<uint32_t>(lo);
  }

  // m independent draws, in stream order. m == 0 yields an empty multiset.
  std::vector<uint32_t> draw_multiset(Stream& stream, SampleAccount& account, uint64_t m) const {
    std::vector<uint32_t> out;
    out.reserve(m);
    for (uint64_t i = 0; i < m; ++i) out.push_back(draw(stream, account));
    return out;
  }

 private:
  std::vector<int64_t> prefix_;
  uint64_t total_ = 0;
  std::vector<BigInt> big_prefix_;
  BigInt big_total_;
};

// Point-probe access with a hard budget. Exhausting the budget is a recorded
// signal (std::nullopt), not an error.
class BudgetedProbe {
 public:
  BudgetedProbe(const KnapsackInstance& inst, uint64_t budget, SampleAccount& account)
      : inst_(inst), budget_(budget), account_(account) {}

  std::optional<Item> probe(size_t index) {
    if (used_ >= budget_) {
      exceeded_ = true;
      return std::nullopt;
    }
    ++used_;
    ++account_.point_probes;
    return inst_.item(index);
  }

  uint64_t used() const { return used_; }
  bool exceeded() const { return exceeded_; }

 private:
  const KnapsackInstance& inst_;
  uint64_t budget_;
  SampleAccount& account_;
  uint64_t used_ = 0;
  bool exceeded_ = false;
};

}  // namespace knapq
