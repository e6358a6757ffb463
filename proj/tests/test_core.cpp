#include <doctest.h>

#include <random>

#include "knapsack/dp_table.hpp"
#include "knapsack/instance.hpp"
#include "oracles.hpp"

using namespace knapsack;

TEST_CASE("profit bottom absorbs and loses every comparison") {
  Profit b = Profit::bottom();
  for (Wide x : {Wide(-5), Wide(0), Wide(7), Wide(1) << 100}) {
    CHECK((b + Profit(x)).is_bottom());
    CHECK((Profit(x) + b).is_bottom());
    CHECK(max(b, Profit(x)) == Profit(x));
    CHECK(b < Profit(x));
  }
  CHECK(b == Profit::bottom());
  CHECK(Profit().is_bottom());
}

TEST_CASE("profit overflow is detected") {
  Profit big(std::numeric_limits<Wide>::max());
  CHECK_THROWS_AS(big + Profit(1), std::overflow_error);
  CHECK_THROWS_AS(checked_mul(Wide(1) << 100, Wide(1) << 30), std::overflow_error);
}

TEST_CASE("wide integers print and parse") {
  CHECK(to_string(Wide(0)) == "0");
  CHECK(to_string(Wide(-123)) == "-123");
  Wide mx = std::numeric_limits<Wide>::max();
  CHECK(parse_wide(to_string(mx)) == mx);
  CHECK(to_string(std::numeric_limits<Wide>::min()) == "-170141183460469231731687303715884105728");
  CHECK_THROWS(parse_wide("12x"));
  CHECK_THROWS(parse_wide(""));
  CHECK_THROWS(parse_wide("999999999999999999999999999999999999999999"));
}

TEST_CASE("normalize") {
  std::vector<Item> a{{5, 9}};
  Instance i1 = normalize(a, 3);
  CHECK(i1.size() == 0);
  CHECK(i1.all_fit);
  CHECK(i1.total_profit == 0);

  std::vector<Item> b{{2, 3}, {3, 4}};
  Instance i2 = normalize(b, 10);
  CHECK(i2.all_fit);
  CHECK(i2.total_profit == 7);

  std::vector<Item> c{{2, 3}, {3, 4}, {5, 5}};
  Instance i3 = normalize(c, 6);
  CHECK(i3.size() == 3);
  CHECK(i3.w_max == 5);
  CHECK_FALSE(i3.all_fit);

  CHECK_THROWS(normalize(c, -1));
  std::vector<Item> bad{{0, 3}};
  CHECK_THROWS(normalize(bad, 4));
}

TEST_CASE("break_ties worked example") {
  std::vector<Item> raw{{2, 3}, {2, 3}};
  Instance inst = normalize(raw, 3);
  Instance p = break_ties(inst);
  REQUIRE(p.tie_break_M.has_value());
  CHECK(*p.tie_break_M == 6);
  CHECK(p.items[0].profit == 39);
  CHECK(p.items[1].profit == 41);
  CHECK(recover_profit(Profit(80), 6, 2) == Profit(6));
  CHECK(recover_profit(Profit(0), 6, 2) == Profit(0));
  CHECK(recover_profit(Profit::bottom(), 6, 2).is_bottom());
}

TEST_CASE("tie breaking preserves every subset sum") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 60; ++rep) {
    std::size_t n = 1 + rng() % 10;
    auto items = oracle::random_items(rng, n, 6, 5);
    Instance inst = normalize(items, 1000);
    inst.all_fit = false;
    Instance p = break_ties(inst);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        CHECK(p.items[a].profit != p.items[b].profit);
        CHECK(p.items[a].profit * p.items[b].weight != p.items[b].profit * p.items[a].weight);
      }
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      Wide s = 0, sp = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) s += inst.items[i].profit, sp += p.items[i].profit;
      CHECK(recover_profit(Profit(sp), *p.tie_break_M, p.w_max) == Profit(s));
    }
  }
}

TEST_CASE("greedy split worked example") {
  std::vector<Item> raw{{2, 30}, {3, 40}, {5, 50}};
  Instance inst = break_ties(normalize(raw, 6));
  GreedySplit g = greedy_split(inst);
  CHECK(g.break_index == 2);
  CHECK(g.greedy_weight == 5);
  CHECK(g.in_greedy[0]);
  CHECK(g.in_greedy[1]);
  CHECK_FALSE(g.in_greedy[2]);
  CHECK(g.order == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("ranks follow profit order on each side") {
  // one cheap dense item fills G; three weight-3 items stay outside
  std::vector<Item> raw{{1, 100}, {3, 9}, {3, 7}, {3, 5}};
  Instance inst = normalize(raw, 3);
  GreedySplit g = greedy_split(inst);
  REQUIRE(g.break_index == 1);
  CHECK(g.rank[1] == 1);
  CHECK(g.rank[2] == 2);
  CHECK(g.rank[3] == 3);
  const WeightClass* c = g.find_class(3);
  REQUIRE(c);
  CHECK(c->outside == std::vector<std::size_t>{1, 2, 3});

  std::vector<Item> raw2{{2, 10}, {2, 12}, {2, 11}, {5, 1}};
  Instance inst2 = normalize(raw2, 6);
  GreedySplit g2 = greedy_split(inst2);
  REQUIRE(g2.break_index == 3);
  const WeightClass* c2 = g2.find_class(2);
  CHECK(c2->inside == std::vector<std::size_t>{0, 2, 1});
  CHECK(g2.rank[0] == 1);
  CHECK(g2.rank[1] == 3);
}

TEST_CASE("greedy weight lies within one item of capacity") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    auto items = oracle::random_items(rng, 2 + rng() % 30, 1 + rng() % 20, 50);
    std::int64_t sum = 0;
    for (auto& it : items) sum += it.weight;
    Instance inst = normalize(items, static_cast<std::int64_t>(rng() % sum));
    if (inst.all_fit || inst.size() == 0) continue;
    inst = break_ties(inst);
    GreedySplit g = greedy_split(inst);
    CHECK(g.greedy_weight <= inst.capacity);
    CHECK(g.greedy_weight > inst.capacity - inst.w_max);
    CHECK(g.break_index >= 1);
    CHECK(g.break_index <= inst.size() - 1);
    for (const auto& cls : g.classes) {
      for (std::size_t r = 1; r < cls.outside.size(); ++r)
        CHECK(inst.items[cls.outside[r - 1]].profit > inst.items[cls.outside[r]].profit);
      for (std::size_t r = 1; r < cls.inside.size(); ++r)
        CHECK(inst.items[cls.inside[r - 1]].profit < inst.items[cls.inside[r]].profit);
      CHECK(cls.outside.size() <= static_cast<std::size_t>(4 * inst.w_max));
    }
  }
}

TEST_CASE("dp_resize pads and truncates") {
  DpTable q(0);
  q[0] = 0;
  DpTable p = dp_resize(q, 3);
  CHECK(p.half_size() == 3);
  CHECK(p[0] == Profit(0));
  for (int z : {-3, -2, -1, 1, 2, 3}) CHECK(p[z].is_bottom());

  DpTable r(3);
  r[2] = 5;
  r[0] = 1;
  DpTable s = dp_resize(r, 1);
  CHECK(s.half_size() == 1);
  CHECK(s.at(2).is_bottom());
  CHECK(s[0] == Profit(1));
  CHECK(dp_resize(r, 3) == r);
}
