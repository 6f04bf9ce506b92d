#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "knapq/instance.hpp"

using knapq::EfficiencySequence;
using knapq::Item;
using knapq::ItemClass;
using knapq::KnapsackInstance;
using knapq::Rational;

namespace {

Rational rat(int64_t n, int64_t d) { return Rational::ratio(n, d); }

// Twenty items of profit 1/20 whose efficiencies are 20, 19, ..., 1.
KnapsackInstance twenty_small_items() {
  std::vector<Item> items;
  for (int64_t e = 20; e >= 1; --e)
    items.push_back(Item{rat(1, 20), rat(1, 20 * e)});
  return KnapsackInstance::from_rationals(items, Rational(1));
}

}  // namespace

TEST_CASE("normalize divides profits only") {
  auto inst = KnapsackInstance::normalize({{60, 10}, {100, 20}, {120, 30}}, 50);
  CHECK(inst.item(0).profit == rat(60, 280));
  CHECK(inst.item(1).profit == rat(100, 280));
  CHECK(inst.item(2).profit == rat(120, 280));
  Rational sum;
  for (const auto& it : inst.items()) sum += it.profit;
  CHECK(sum == Rational(1));
  CHECK(inst.item(0).weight == Rational(10));
  CHECK(inst.capacity() == Rational(50));
  REQUIRE(inst.raw_grid().has_value());
  CHECK(inst.raw_grid()->profit_total == 280);
  CHECK(inst.raw_grid()->capacity_units == 50);
}

TEST_CASE("normalize corner cases") {
  auto single = KnapsackInstance::normalize({{5, 1}}, 1);
  CHECK(single.item(0).profit == Rational(1));

  CHECK_THROWS(KnapsackInstance::normalize({{1, 2}}, 1));     // weight over capacity
  CHECK_THROWS(KnapsackInstance::normalize({}, 10));          // empty
  CHECK_THROWS(KnapsackInstance::normalize({{0, 1}}, 1));     // zero total profit
  CHECK_THROWS(KnapsackInstance::normalize({{-1, 1}}, 1));    // negative profit
  CHECK_THROWS(KnapsackInstance::normalize({{1, 0}}, 1));     // zero weight
}

TEST_CASE("fractional weight grid via weight_denom") {
  auto inst = KnapsackInstance::normalize({{1, 1}, {1, 3}}, 4, 2);
  CHECK(inst.item(0).weight == rat(1, 2));
  CHECK(inst.item(1).weight == rat(3, 2));
  CHECK(inst.capacity() == Rational(2));
}

TEST_CASE("partition classifies by the exact inequalities") {
  // eps = 1/10: thresholds at profit 1/100 and efficiency 1/100.
  std::vector<Item> items{
      {rat(1, 50), rat(1, 2)},     // profit above eps^2: large
      {rat(1, 125), rat(1, 5)},    // efficiency 1/25: small
      {rat(1, 250), rat(9, 10)},   // efficiency 1/225: garbage
      {rat(121, 125), rat(1, 2)},  // filler so profits sum to 1
  };
  auto inst = KnapsackInstance::from_rationals(items, Rational(1));
  auto part = knapq::partition(inst, rat(1, 10));
  CHECK(part.cls[0] == ItemClass::Large);
  CHECK(part.cls[1] == ItemClass::Small);
  CHECK(part.cls[2] == ItemClass::Garbage);
  CHECK(part.cls[3] == ItemClass::Large);
  CHECK(part.large_profit == rat(1, 50) + rat(121, 125));
}

TEST_CASE("partition rejects unnormalized instances and bad eps") {
  auto inst = KnapsackInstance::from_rationals({{rat(1, 2), Rational(1)}}, Rational(2));
  CHECK_FALSE(inst.profits_normalized());
  CHECK_THROWS(knapq::partition(inst, rat(1, 2)));
  auto ok = KnapsackInstance::normalize({{1, 1}}, 1);
  CHECK_THROWS(knapq::partition(ok, Rational(0)));
  CHECK_THROWS(knapq::partition(ok, rat(3, 2)));
  CHECK_NOTHROW(knapq::partition(ok, Rational(1)));
}

TEST_CASE("bucketize respects the half-open boundaries") {
  // eps = 1/2. Small items with efficiencies 5, 3, 1; a garbage filler.
  std::vector<Item> items{
      {rat(1, 4), rat(1, 20)},  // eff 5
      {rat(1, 4), rat(1, 12)},  // eff 3
      {rat(1, 4), rat(1, 4)},   // eff 1
      {rat(1, 4), Rational(2)},  // eff 1/8 < 1/4: garbage
  };
  auto inst = KnapsackInstance::from_rationals(items, Rational(2));
  auto part = knapq::partition(inst, rat(1, 2));
  REQUIRE(part.small.size() == 3);
  REQUIRE(part.garbage.size() == 1);

  EfficiencySequence seq({Rational(4), Rational(2)});
  auto buckets = knapq::bucketize(inst, part, seq);
  REQUIRE(buckets.size() == 3);
  CHECK(buckets[0] == std::vector<int32_t>{0});
  CHECK(buckets[1] == std::vector<int32_t>{1});
  CHECK(buckets[2] == std::vector<int32_t>{2});
}

TEST_CASE("item at a threshold goes to the upper bucket") {
  std::vector<Item> items{
      {rat(1, 8), rat(1, 32)},  // eff 4, exactly e_1
      {rat(7, 8), rat(1, 2)},   // large filler
  };
  auto inst = KnapsackInstance::from_rationals(items, Rational(1));
  auto part = knapq::partition(inst, rat(1, 2));
  EfficiencySequence seq({Rational(4), Rational(2)});
  auto buckets = knapq::bucketize(inst, part, seq);
  CHECK(buckets[0] == std::vector<int32_t>{0});
  CHECK(buckets[1].empty());
  CHECK(buckets[2].empty());
}

TEST_CASE("empty sequence puts all small items in one tail bucket") {
  auto inst = twenty_small_items();
  auto part = knapq::partition(inst, rat(1, 4));
  CHECK(part.small.size() == 20);
  auto buckets = knapq::bucketize(inst, part, EfficiencySequence());
  REQUIRE(buckets.size() == 1);
  CHECK(buckets[0].size() == 20);
}

TEST_CASE("eps check on the twenty-item fixture") {
  auto inst = twenty_small_items();
  auto part = knapq::partition(inst, rat(1, 4));

  EfficiencySequence good({rat(31, 2), rat(21, 2), rat(11, 2)});
  auto res = knapq::check_eps_sequence(inst, part, good);
  CHECK(res.ok);
  REQUIRE(res.bucket_profits.size() == 4);
  for (const auto& p : res.bucket_profits) CHECK(p == rat(1, 4));

  EfficiencySequence bad({rat(31, 2)});
  auto res2 = knapq::check_eps_sequence(inst, part, bad);
  CHECK_FALSE(res2.ok);
  REQUIRE(res2.bucket_profits.size() == 2);
  CHECK(res2.bucket_profits[0] == rat(1, 4));
  CHECK(res2.bucket_profits[1] == rat(3, 4));  // tail at 3/4 >= 5/16
}

TEST_CASE("eps check is vacuous without small items") {
  auto inst = KnapsackInstance::normalize({{1, 1}, {1, 1}}, 1);
  auto part = knapq::partition(inst, rat(1, 4));
  CHECK(part.small.empty());
  CHECK(knapq::check_eps_sequence(inst, part, EfficiencySequence()).ok);
}

TEST_CASE("efficiency sequence validates ordering") {
  CHECK_THROWS(EfficiencySequence({Rational(1), Rational(2)}));
  EfficiencySequence seq({Rational(3), Rational(3), Rational(1)});
  CHECK(seq.size() == 3);
  CHECK(seq.at(1) == Rational(3));
  CHECK(seq.at(3) == Rational(1));
  CHECK_THROWS(seq.at(0));
  CHECK_THROWS(seq.at(4));
}

TEST_CASE("partition is a disjoint cover on random instances") {
  std::mt19937_64 rng(417);
  std::uniform_int_distribution<int> nd(1, 30);
  std::uniform_int_distribution<int64_t> pd(0, 100);
  std::uniform_int_distribution<int64_t> wd(1, 50);
  const Rational eps_grid[] = {rat(1, 2), rat(1, 3), rat(1, 10)};

  for (int iter = 0; iter < 10000; ++iter) {
    const int n = nd(rng);
    std::vector<std::pair<int64_t, int64_t>> raw;
    int64_t wmax = 1;
    for (int i = 0; i < n; ++i) {
      raw.emplace_back(pd(rng), wd(rng));
      wmax = std::max(wmax, raw.back().second);
    }
    raw[0].first = std::max<int64_t>(raw[0].first, 1);  // keep total positive
    std::uniform_int_distribution<int64_t> cd(wmax, wmax + 60);
    auto inst = KnapsackInstance::normalize(raw, cd(rng));
    const Rational& eps = eps_grid[iter % 3];
    auto part = knapq::partition(inst, eps);

    CHECK(part.large.size() + part.small.size() + part.garbage.size() == inst.size());
    for (int32_t i : part.large) CHECK(part.cls[i] == ItemClass::Large);
    for (int32_t i : part.small) CHECK(part.cls[i] == ItemClass::Small);
    for (int32_t i : part.garbage) CHECK(part.cls[i] == ItemClass::Garbage);

    // each large profit exceeds eps^2 and totals are at most 1
    const Rational eps_sq = eps * eps;
    CHECK(Rational(static_cast<int64_t>(part.large.size())) * eps_sq < Rational(1) + eps_sq);
  }
}

TEST_CASE("is_eps agrees with a direct bucket recomputation") {
  std::mt19937_64 rng(991);
  std::uniform_int_distribution<int64_t> pd(1, 40);
  std::uniform_int_distribution<int64_t> wd(1, 40);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<std::pair<int64_t, int64_t>> raw;
    for (int i = 0; i < 25; ++i) raw.emplace_back(pd(rng), wd(rng));
    auto inst = KnapsackInstance::normalize(raw, 60);
    const Rational eps = rat(1, 3);
    auto part = knapq::partition(inst, eps);

    std::vector<Rational> th;
    for (int k = 0; k < 3; ++k) th.push_back(rat(3 - k, 1 + (iter % 4)));
    EfficiencySequence seq(th);

    auto res = knapq::check_eps_sequence(inst, part, seq);
    auto buckets = knapq::bucketize(inst, part, seq);
    REQUIRE(res.bucket_profits.size() == buckets.size());

    size_t covered = 0;
    bool expect_ok = true;
    const Rational hi = eps + eps * eps;
    for (size_t k = 0; k < buckets.size(); ++k) {
      Rational sum;
      for (int32_t idx : buckets[k]) sum += inst.item(idx).profit;
      covered += buckets[k].size();
      CHECK(sum == res.bucket_profits[k]);
      const bool tail = (k == buckets.size() - 1);
      if (sum >= hi || (!tail && sum < eps)) expect_ok = false;
    }
    CHECK(covered == part.small.size());
    CHECK(res.ok == expect_ok);
  }
}
