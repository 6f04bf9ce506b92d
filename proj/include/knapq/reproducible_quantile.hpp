#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "knapq/instance.hpp"
#include "knapq/prng.hpp"

namespace knapq {

// Fixed-width integer codes for the efficiency values a given instance can
// realize. Codes are ranks in the sorted list of distinct efficiencies of
// positive-profit items, so encode/decode round-trips exactly for any value
// the sampler can produce and order is preserved.
class DiscreteDomain {
 public:
  static DiscreteDomain from_instance(const KnapsackInstance& inst, int bit_width = 32) {
    if (!inst.profits_normalized())
      throw std::invalid_argument("domain: requires a profit-normalized instance");
    if (bit_width < 1 || bit_width > 62)
      throw std::invalid_argument("domain: bit width out of range");
    DiscreteDomain d;
    d.bit_width_ = bit_width;
    for (size_t i = 0; i < inst.size(); ++i) {
      if (!inst.item(i).profit.is_zero()) d.values_.push_back(inst.efficiency(i));
    }
    std::sort(d.values_.begin(), d.values_.end());
    d.values_.erase(std::unique(d.values_.begin(), d.values_.end()), d.values_.end());
    if (d.values_.empty()) throw std::invalid_argument("domain: no positive-profit items");
    if (bit_width < 62 && d.values_.size() > (uint64_t{1} << bit_width))
      throw std::domain_error("domain: distinct values exceed the code width");
    return d;
  }

  // Largest code whose value is <= e; values below the minimum clamp to 0.
  // Exact on every member value, monotone everywhere.
  int64_t encode(const Rational& e) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), e);
    if (it == values_.begin()) return 0;
    return static_cast<int64_t>(it - values_.begin()) - 1;
  }

  const Rational& decode(int64_t code) const {
    if (code < 0 || code >= static_cast<int64_t>(values_.size()))
      throw std::out_of_range("domain: code out of range");
    return values_[static_cast<size_t>(code)];
  }

  int64_t size() const { return static_cast<int64_t>(values_.size()); }
  int bit_width() const { return bit_width_; }
  int64_t min_code() const { return 0; }
  int64_t max_code() const { return size() - 1; }

 private:
  std::vector<Rational> values_;
  int bit_width_ = 32;
};

// Parameters for the randomized-threshold quantile routines.
//   rho   target disagreement rate between two runs sharing internal coins
//   tau   quantile accuracy (CDF window half-widths are tau at the quantile
//         level; the inner median runs at tau/2)
//   beta  failure budget for the accuracy guarantee
//   n_rq  minimum sample size the caller must supply
struct QuantileParams {
  Rational rho;
  Rational tau;
  Rational beta;
  int domain_bits = 32;
  uint64_t n_rq = 0;

  // Sample size sufficient for a median at accuracy tau_m with failure
  // budget beta_m, from the standard empirical-CDF deviation bound. The
  // optional rep term scales the worst-case replication budget; it is kept
  // off by default because the constant-free bound is astronomically loose,
  // and exposed so experiments can dial it up.
  static uint64_t required_samples(const Rational& tau_m, const Rational& beta_m,
                                   double rep_constant = 0.0,
                                   const Rational& rho = Rational(0)) {
    if (!(tau_m > Rational(0)) || tau_m >= Rational(1))
      throw std::invalid_argument("quantile: tau out of range");
    if (!(beta_m > Rational(0)) || beta_m >= Rational(1))
      throw std::invalid_argument("quantile: beta out of range");
    double tm = tau_m.to_double();
    double lb = std::log(2.0 / beta_m.to_double());
    uint64_t n = static_cast<uint64_t>(std::ceil(2.0 * lb / (tm * tm)));
    if (rep_constant > 0.0 && !rho.is_zero()) {
      double rt = rho.to_double() * tm;
      uint64_t n_rep = static_cast<uint64_t>(std::ceil(rep_constant * lb / (rt * rt)));
      n = std::max(n, n_rep);
    }
    return std::max<uint64_t>(n, 2);
  }
};

namespace detail {

// Rank-target inversion of the empirical CDF. The threshold alpha is drawn
// uniformly from [ (1 - tau_m)/2, (1 + tau_m)/2 ] using one word from the
// shared stream, and the output is the smallest code whose empirical CDF
// reaches alpha. The rank is computed with integer arithmetic so that equal
// samples and equal shared draws give bit-identical results.
inline int64_t median_by_rank(const std::vector<int64_t>& codes, const Rational& tau_m,
                              uint64_t n_required, Stream& shared) {
  if (codes.size() < n_required || codes.empty())
    throw std::invalid_argument("quantile: sample smaller than required size");
  const uint64_t u = shared.next_u64();
  const Rational two64(BigInt(1) << 64);
  const Rational alpha =
      (Rational(1) - tau_m) / Rational(2) + tau_m * Rational(BigInt(u)) / two64;
  const BigInt n(static_cast<uint64_t>(codes.size()));
  BigInt rank = (alpha * Rational(n)).ceil();
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  const size_t k = static_cast<size_t>(static_cast<uint64_t>(rank)) - 1;
  std::vector<int64_t> work(codes);
  std::nth_element(work.begin(), work.begin() + static_cast<ptrdiff_t>(k), work.end());
  return work[k];
}

constexpr int64_t kSentinelLow = std::numeric_limits<int64_t>::min();
constexpr int64_t kSentinelHigh = std::numeric_limits<int64_t>::max();

}  // namespace detail

// Randomized-threshold median. Accuracy window is params.tau around 1/2.
inline int64_t r_median(const std::vector<int64_t>& codes, const QuantileParams& params,
                        Stream& shared) {
  return detail::median_by_rank(codes, params.tau, params.n_rq, shared);
}

// Composition of the mixture handed to the inner median.
struct MixStats {
  uint64_t kept = 0;
  uint64_t low = 0;
  uint64_t high = 0;
};

// Randomized-threshold quantile at level p in (0, 1). Each sample is kept
// with probability 1/2 and otherwise replaced by a sentinel that is high
// with probability p, which recenters the p-quantile at the median; the
// inner median then runs at accuracy params.tau / 2. Keep/replace coins and
// sentinel kinds come from `pad` (per-run randomness), the threshold comes
// from `shared`. Sentinel outputs clamp to `clamp` when given, else to the
// extreme values present in the sample.
inline int64_t r_quantile(const std::vector<int64_t>& codes, const Rational& p,
                          const QuantileParams& params, Stream& shared, Stream& pad,
                          std::optional<std::pair<int64_t, int64_t>> clamp = std::nullopt,
                          MixStats* stats = nullptr) {
  if (!(p > Rational(0)) || !(p < Rational(1)))
    throw std::invalid_argument("quantile: level out of range");
  if (codes.size() < params.n_rq || codes.empty())
    throw std::invalid_argument("quantile: sample smaller than required size");
  MixStats local;
  std::vector<int64_t> mixed;
  mixed.reserve(codes.size());
  // The sentinel coin draws exactly what Stream::bernoulli would draw for p,
  // with the threshold resolved once instead of per element.
  const bool den_fits = p.den() <= std::numeric_limits<uint64_t>::max();
  const uint64_t num_u64 = den_fits ? static_cast<uint64_t>(p.num()) : 0;
  const uint64_t den_u64 = den_fits ? static_cast<uint64_t>(p.den()) : 0;
  for (int64_t c : codes) {
    if (pad.next_bit()) {
      mixed.push_back(c);
      ++local.kept;
      continue;
    }
    const bool high = den_fits ? pad.uniform_below(den_u64) < num_u64 : pad.bernoulli(p);
    if (high) {
      mixed.push_back(detail::kSentinelHigh);
      ++local.high;
    } else {
      mixed.push_back(detail::kSentinelLow);
      ++local.low;
    }
  }
  if (stats != nullptr) *stats = local;
  const Rational tau_med = params.tau / Rational(2);
  int64_t out = detail::median_by_rank(mixed, tau_med, params.n_rq, shared);
  int64_t lo, hi;
  if (clamp.has_value()) {
    lo = clamp->first;
    hi = clamp->second;
  } else {
    auto [mn, mx] = std::minmax_element(codes.begin(), codes.end());
    lo = *mn;
    hi = *mx;
  }
  if (out == detail::kSentinelLow) return lo;
  if (out == detail::kSentinelHigh) return hi;
  return out;
}

}  // namespace knapq
