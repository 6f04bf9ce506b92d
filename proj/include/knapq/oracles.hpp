#pragma once

#include <cstdint>
#include <vector>

#include "knapq/instance.hpp"

namespace knapq {

struct SolveResult {
  std::vector<uint32_t> chosen;  // ascending item indices
  Rational value;
  Rational weight;
};

// Sum of profits/weights over an index set, with a feasibility check.
SolveResult evaluate_selection(const KnapsackInstance& inst, const std::vector<uint32_t>& chosen);
bool is_feasible(const KnapsackInstance& inst, const std::vector<uint32_t>& chosen);

// Exhaustive search, n <= 24. Ties between maximizers are broken by greedy
// inclusion: prefer the solution containing item 0, then item 1, and so on.
SolveResult brute_force(const KnapsackInstance& inst);

// Exact dynamic program over the instance's raw integer grid. Keeps the full
// suffix value table for reconstruction, so it is meant for small instances;
// throws if (n + 1) * (capacity_units + 1) exceeds budget_cells. Uses the
// same tie-break as brute_force.
SolveResult dp_exact(const KnapsackInstance& inst, uint64_t budget_cells = 100'000'000);

// Optimal value only, rolling single row. Same grid requirement; the budget
// here bounds time (cell updates), not memory.
Rational dp_value(const KnapsackInstance& inst, uint64_t budget_cells = 4'000'000'000);

// Efficiency-ordered prefix, compared against the first item that failed to
// fit; the singleton wins only when strictly better. Zero-profit items are
// never taken.
SolveResult greedy_half(const KnapsackInstance& inst);

// Value of the fractional relaxation by greedy filling. Upper-bounds the
// integral optimum.
Rational fractional_greedy_value(const KnapsackInstance& inst);

}  // namespace knapq
