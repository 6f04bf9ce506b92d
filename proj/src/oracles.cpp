#include "knapq/oracles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace knapq {

SolveResult evaluate_selection(const KnapsackInstance& inst, const std::vector<uint32_t>& chosen) {
  SolveResult r;
  r.chosen = chosen;
  std::sort(r.chosen.begin(), r.chosen.end());
  for (uint32_t i : r.chosen) {
    r.value += inst.item(i).profit;
    r.weight += inst.item(i).weight;
  }
  return r;
}

bool is_feasible(const KnapsackInstance& inst, const std::vector<uint32_t>& chosen) {
  Rational w;
  for (uint32_t i : chosen) w += inst.item(i).weight;
  return w <= inst.capacity();
}

namespace {

// True when a's ascending index list lexicographically precedes b's. At the
// lowest differing index, the set containing it comes first unless the other
// set has nothing beyond that point (a proper prefix precedes).
bool mask_lex_less(uint32_t a, uint32_t b) {
  uint32_t diff = a ^ b;
  if (diff == 0) return false;
  const int i = std::countr_zero(diff);
  if ((a >> i) & 1u) return (b >> i) != 0;
  return (a >> i) == 0;
}

std::vector<uint32_t> mask_to_indices(uint32_t mask) {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; mask >> i; ++i)
    if ((mask >> i) & 1u) out.push_back(i);
  return out;
}

}  // namespace

SolveResult brute_force(const KnapsackInstance& inst) {
  const size_t n = inst.size();
  if (n > 24) throw std::invalid_argument("brute_force: instance too large");

  const uint32_t total = uint32_t{1} << n;
  uint32_t best_mask = 0;

  if (inst.raw_grid().has_value()) {
    const RawGrid& g = *inst.raw_grid();
    const int64_t cap = g.capacity_units;
    int64_t value = 0, weight = 0, best_value = 0;
    // Gray-code walk: one item flips per step, so sums update in O(1).
    uint32_t mask = 0;
    for (uint32_t step = 1; step < total; ++step) {
      const uint32_t bit = static_cast<uint32_t>(std::countr_zero(step));
      mask ^= uint32_t{1} << bit;
      const int64_t sign = (mask >> bit) & 1u ? 1 : -1;
      value += sign * g.profit_units[bit];
      weight += sign * g.weight_units[bit];
      if (weight > cap) continue;
      if (value > best_value || (value == best_value && mask_lex_less(mask, best_mask))) {
        best_value = value;
        best_mask = mask;
      }
    }
  } else {
    const Rational cap = inst.capacity();
    Rational value, weight, best_value;
    uint32_t mask = 0;
    for (uint32_t step = 1; step < total; ++step) {
      const uint32_t bit = static_cast<uint32_t>(std::countr_zero(step));
      mask ^= uint32_t{1} << bit;
      if ((mask >> bit) & 1u) {
        value += inst.item(bit).profit;
        weight += inst.item(bit).weight;
      } else {
        value -= inst.item(bit).profit;
        weight -= inst.item(bit).weight;
      }
      if (weight > cap) continue;
      if (value > best_value || (value == best_value && mask_lex_less(mask, best_mask))) {
        best_value = value;
        best_mask = mask;
      }
    }
  }
  return evaluate_selection(inst, mask_to_indices(best_mask));
}

SolveResult dp_exact(const KnapsackInstance& inst, uint64_t budget_cells) {
  if (!inst.raw_grid().has_value())
    throw std::invalid_argument("dp_exact: instance has no integer grid");
  const RawGrid& g = *inst.raw_grid();
  const size_t n = inst.size();
  const int64_t cap = g.capacity_units;
  const uint64_t cells = (static_cast<uint64_t>(n) + 1) * (static_cast<uint64_t>(cap) + 1);
  if (cells > budget_cells) throw std::length_error("dp_exact: table exceeds cell budget");

  const size_t stride = static_cast<size_t>(cap) + 1;
  std::vector<int64_t> table(cells, 0);  // row i = best suffix value from item i
  for (size_t i = n; i-- > 0;) {
    const int64_t p = g.profit_units[i];
    const int64_t w = g.weight_units[i];
    int64_t* cur = table.data() + i * stride;
    const int64_t* nxt = cur + stride;
    for (int64_t c = 0; c <= cap; ++c) {
      int64_t v = nxt[c];
      if (w <= c) v = std::max(v, p + nxt[c - w]);
      cur[c] = v;
    }
  }

  // Take an item whenever taking it preserves optimality, stopping once the
  // remaining suffix contributes nothing; this reconstructs the
  // lexicographically smallest maximizer, matching brute_force.
  std::vector<uint32_t> chosen;
  int64_t c = cap;
  for (size_t i = 0; i < n; ++i) {
    const int64_t* row = table.data() + i * stride;
    if (row[c] == 0) break;
    const int64_t w = g.weight_units[i];
    if (w > c) continue;
    const int64_t* nxt = row + stride;
    if (g.profit_units[i] + nxt[c - w] == row[c]) {
      chosen.push_back(static_cast<uint32_t>(i));
      c -= w;
    }
  }
  return evaluate_selection(inst, chosen);
}

Rational dp_value(const KnapsackInstance& inst, uint64_t budget_cells) {
  if (!inst.raw_grid().has_value())
    throw std::invalid_argument("dp_value: instance has no integer grid");
  const RawGrid& g = *inst.raw_grid();
  const size_t n = inst.size();
  const int64_t cap = g.capacity_units;
  if (static_cast<uint64_t>(n) * (static_cast<uint64_t>(cap) + 1) > budget_cells)
    throw std::length_error("dp_value: exceeds cell budget");

  std::vector<int64_t> row(static_cast<size_t>(cap) + 1, 0);
  for (size_t i = 0; i < n; ++i) {
    const int64_t p = g.profit_units[i];
    const int64_t w = g.weight_units[i];
    if (w > cap) continue;
    for (int64_t c = cap; c >= w; --c)
      row[c] = std::max(row[c], p + row[c - w]);
  }
  return Rational(BigInt(row[static_cast<size_t>(cap)]), BigInt(g.profit_denom));
}

namespace {

// Positive-profit indices by efficiency, best first; index breaks ties.
// Items that cannot fit on their own are left out entirely.
std::vector<uint32_t> efficiency_order(const KnapsackInstance& inst) {
  std::vector<uint32_t> order;
  for (uint32_t i = 0; i < inst.size(); ++i)
    if (!inst.item(i).profit.is_zero() && inst.item(i).weight <= inst.capacity())
      order.push_back(i);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const Rational ea = inst.efficiency(a), eb = inst.efficiency(b);
    if (ea != eb) return ea > eb;
    return a < b;
  });
  return order;
}

}  // namespace

SolveResult greedy_half(const KnapsackInstance& inst) {
  SolveResult prefix;
  std::optional<uint32_t> excluded;
  for (uint32_t i : efficiency_order(inst)) {
    if (prefix.weight + inst.item(i).weight <= inst.capacity()) {
      prefix.chosen.push_back(i);
      prefix.value += inst.item(i).profit;
      prefix.weight += inst.item(i).weight;
    } else {
      excluded = i;
      break;
    }
  }
  if (excluded.has_value() && inst.item(*excluded).profit > prefix.value)
    return evaluate_selection(inst, {*excluded});
  std::sort(prefix.chosen.begin(), prefix.chosen.end());
  return prefix;
}

Rational fractional_greedy_value(const KnapsackInstance& inst) {
  Rational value, weight;
  for (uint32_t i : efficiency_order(inst)) {
    const Rational& w = inst.item(i).weight;
    if (weight + w <= inst.capacity()) {
      value += inst.item(i).profit;
      weight += w;
    } else {
      const Rational room = inst.capacity() - weight;
      value += inst.item(i).profit * room / w;
      break;
    }
  }
  return value;
}

}  // namespace knapq
