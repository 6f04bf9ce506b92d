#include "knapq/generators.hpp"

#include <algorithm>
#include <stdexcept>

#include "knapq/prng.hpp"

namespace knapq {

namespace {

// Items are drawn in index order, profit before weight, from a single
// stream. Every profile scales weights by the capacity (weight_denom equals
// the capacity units), so instances live at capacity 1, the regime the
// efficiency cutoffs are calibrated for; the capacity never falls below the
// largest weight a profile can draw, so normalize() admits every item.
constexpr const char* kLabel = "generator";

int64_t draw_range(Stream& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(rng.uniform_below(static_cast<uint64_t>(hi - lo + 1)));
}

int64_t capacity_for(int64_t weight_sum, int64_t divisor, int64_t max_weight) {
  return std::max(max_weight, weight_sum / divisor);
}

}  // namespace

GenProfile profile_from_name(const std::string& name) {
  if (name == "uniform") return GenProfile::uniform;
  if (name == "small_items") return GenProfile::small_items;
  if (name == "large_heavy") return GenProfile::large_heavy;
  if (name == "mixed") return GenProfile::mixed;
  throw std::invalid_argument("generator: unknown profile " + name);
}

const char* profile_name(GenProfile profile) {
  switch (profile) {
    case GenProfile::uniform: return "uniform";
    case GenProfile::small_items: return "small_items";
    case GenProfile::large_heavy: return "large_heavy";
    case GenProfile::mixed: return "mixed";
  }
  throw std::invalid_argument("generator: unknown profile");
}

std::string instance_label(const GenSpec& spec) {
  return std::string(profile_name(spec.profile)) + "-n" + std::to_string(spec.n) + "-k" +
         std::to_string(spec.nonce);
}

KnapsackInstance generate_instance(const GenSpec& spec) {
  Stream rng(spec.seed, kLabel, spec.nonce);
  std::vector<std::pair<int64_t, int64_t>> raw;
  raw.reserve(spec.n);
  int64_t weight_sum = 0;
  const auto push = [&](int64_t p, int64_t w) {
    raw.emplace_back(p, w);
    weight_sum += w;
  };

  switch (spec.profile) {
    case GenProfile::uniform: {
      if (spec.n < 2) throw std::invalid_argument("generator: uniform needs n >= 2");
      for (size_t k = 0; k < spec.n; ++k)
        push(draw_range(rng, 1, 1000), draw_range(rng, 1, 1000));
      const int64_t cap = capacity_for(weight_sum, 4, 1000);
      return KnapsackInstance::normalize(raw, cap, cap);
    }
    case GenProfile::small_items: {
      if (spec.n < 2) throw std::invalid_argument("generator: small_items needs n >= 2");
      for (size_t k = 0; k < spec.n; ++k)
        push(draw_range(rng, 1, 10), draw_range(rng, 1, 100));
      const int64_t cap = capacity_for(weight_sum, 3, 100);
      return KnapsackInstance::normalize(raw, cap, cap);
    }
    case GenProfile::large_heavy: {
      // Three items of profit share 8/25 each; the rest split the last 4%.
      if (spec.n < 4) throw std::invalid_argument("generator: large_heavy needs n >= 4");
      const int64_t big = 8 * static_cast<int64_t>(spec.n - 3);
      for (size_t k = 0; k < 3; ++k) push(big, draw_range(rng, 1, 1000));
      for (size_t k = 3; k < spec.n; ++k) push(1, draw_range(rng, 1, 1000));
      const int64_t cap = capacity_for(weight_sum, 4, 1000);
      return KnapsackInstance::normalize(raw, cap, cap);
    }
    case GenProfile::mixed: {
      if (spec.n < 3) throw std::invalid_argument("generator: mixed needs n >= 3");
      const int64_t big = 30 * static_cast<int64_t>(spec.n);
      for (size_t k = 0; k < 2; ++k) push(big, draw_range(rng, 1, 1000));
      for (size_t k = 2; k < spec.n; ++k)
        push(draw_range(rng, 1, 100), draw_range(rng, 1, 1000));
      const int64_t cap = capacity_for(weight_sum, 4, 1000);
      return KnapsackInstance::normalize(raw, cap, cap);
    }
  }
  throw std::invalid_argument("generator: unknown profile");
}

}  // namespace knapq
