#include <doctest.h>

#include <random>

#include "knapsack/solver.hpp"
#include "oracles.hpp"

using namespace knapsack;

namespace {

std::vector<Item> items_of(std::initializer_list<std::pair<Weight, Wide>> l) {
  std::vector<Item> out;
  for (auto [w, p] : l) out.push_back({w, p});
  return out;
}

Weight random_capacity(std::mt19937_64& rng, const std::vector<Item>& items, Weight limit) {
  Weight sum = 0;
  for (const Item& it : items) sum += it.weight;
  return static_cast<Weight>(rng() % static_cast<std::uint64_t>(std::min(sum, limit) + 1));
}

}  // namespace

TEST_CASE("exhaustive examples and meet in the middle agreement") {
  CHECK(solve_exhaustive({}, 5) == 0);
  CHECK(solve_exhaustive(items_of({{2, 3}, {3, 4}, {5, 5}}), 6) == 7);
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    auto items = oracle::random_items(rng, rng() % 21, 30, 50);
    Weight t = random_capacity(rng, items, 300);
    CHECK(solve_meet_in_middle(items, t) == solve_exhaustive_direct(items, t));
    CHECK(solve_exhaustive_direct(items, t) == oracle::brute_force(items, t));
  }
  CHECK_THROWS_AS(solve_exhaustive(std::vector<Item>(41, Item{1, 1}), 100), SolverRefusal);
}

TEST_CASE("Bellman examples") {
  CHECK(solve_bellman(items_of({{2, 3}, {3, 4}, {5, 5}}), 6) == 7);
  CHECK(solve_bellman(items_of({{2, 3}, {3, 4}}), 0) == 0);
  CHECK(solve_bellman(items_of({{4, 9}}), 7) == 9);
  CHECK(solve_bellman(items_of({{4, 9}}), 3) == 0);
  CHECK_THROWS_AS(solve_bellman(items_of({{40, 9}, {30, 1}}), 60, 100), SolverRefusal);
  CHECK(solve_bellman(items_of({{40, 9}, {30, 1}}), 60, 122) == 9);
}

TEST_CASE("fast solver examples") {
  CHECK(solve_fast({}, 10) == 0);
  CHECK(solve_fast(items_of({{2, 30}, {3, 40}, {5, 50}}), 6) == 70);
  CHECK(solve_fast(items_of({{2, 30}, {3, 40}, {5, 50}}), 100) == 120);
  CHECK(solve_fast(items_of({{2, 30}, {3, 40}, {5, 50}}), 1) == 0);
  CHECK_THROWS_AS(solve_fast(items_of({{0, 1}}), 5), std::invalid_argument);
  CHECK_THROWS_AS(solve_fast(items_of({{1, 1}}), -1), std::invalid_argument);
}

TEST_CASE("proximity baseline examples") {
  CHECK(solve_proximity_smawk(items_of({{2, 30}, {3, 40}, {5, 50}}), 6) == 70);
  // greedy already optimal and no exchange helps
  CHECK(solve_proximity_smawk(items_of({{1, 10}, {1, 9}, {1, 1}}), 2) == 19);
}

TEST_CASE("fast solver equals exhaustive on small mixed instances") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 600; ++round) {
    int kind = round % 3;
    auto items = oracle::random_mixed(rng, 1 + rng() % 16, 1 + rng() % 12, 1 + rng() % 20, kind);
    Weight t = random_capacity(rng, items, 60);
    SolverStats st;
    Wide got = solve_fast(items, t, {}, &st);
    INFO("round " << round << " route " << st.route);
    REQUIRE(got == solve_exhaustive(items, t));
  }
}

TEST_CASE("fast path exercised: many items, small weights") {
  std::mt19937_64 rng(7);
  int fast = 0;
  for (int round = 0; round < 150; ++round) {
    auto items = oracle::random_mixed(rng, 8 + rng() % 30, 2 + rng() % 6, 1 + rng() % 30, round % 3);
    Weight t = random_capacity(rng, items, 200);
    SolverStats st;
    Wide got = solve_fast(items, t, {}, &st);
    fast += st.route == "fast";
    REQUIRE(got == solve_bellman(items, t));
  }
  CHECK(fast > 100);
}

TEST_CASE("fast solver and proximity baseline equal Bellman on medium instances") {
  std::mt19937_64 rng(202);
  for (int round = 0; round < 40; ++round) {
    int kind = round % 3;
    std::size_t n = 20 + rng() % 300;
    Weight wmax = 2 + static_cast<Weight>(rng() % 60);
    auto items = oracle::random_mixed(rng, n, wmax, 1 + rng() % 1000, kind);
    Weight sum = 0;
    for (auto& it : items) sum += it.weight;
    Weight t = static_cast<Weight>(rng() % static_cast<std::uint64_t>(sum + 1));
    Wide ref = solve_bellman(items, t);
    INFO("round " << round << " n=" << n << " wmax=" << wmax << " t=" << t);
    CHECK(solve_fast(items, t) == ref);
    CHECK(solve_proximity_smawk(items, t) == ref);
  }
}

TEST_CASE("answers do not depend on C, the strategy or the reachable clamp") {
  std::mt19937_64 rng(303);
  for (int round = 0; round < 40; ++round) {
    auto items = oracle::random_mixed(rng, 10 + rng() % 60, 2 + rng() % 10, 1 + rng() % 50, round % 3);
    Weight t = random_capacity(rng, items, 400);
    Wide ref = solve_bellman(items, t);
    for (double C : {1.0, 2.0, 4.0}) {
      SolverConfig cfg;
      cfg.C = C;
      CHECK(solve_fast(items, t, cfg) == ref);
    }
    SolverConfig cfg;
    cfg.clamp_to_reachable = false;
    CHECK(solve_fast(items, t, cfg) == ref);
    cfg.clamp_to_reachable = true;
    cfg.strategy = extend::Strategy::color_coding;
    CHECK(solve_fast(items, t, cfg) == ref);
    cfg.strategy = extend::Strategy::per_weight;
    CHECK(solve_fast(items, t, cfg) == ref);
    cfg.force_fallback = true;
    SolverStats st;
    CHECK(solve_fast(items, t, cfg, &st) == ref);
    CHECK(st.route != "fast");
  }
}

TEST_CASE("verify mode cross-checks against Bellman") {
  SolverConfig cfg;
  cfg.verify = VerifyMode::cross_check_bellman;
  CHECK(solve_fast(items_of({{2, 30}, {3, 40}, {5, 50}, {1, 3}, {4, 4}, {2, 2}}), 7, cfg) == 80);
}

TEST_CASE("w_max above n^2 takes the Bellman route") {
  SolverStats st;
  CHECK(solve_fast(items_of({{50, 3}, {60, 4}}), 100, {}, &st) == 4);
  CHECK(st.route == "bellman_fallback");
}

namespace {

struct Prepared {
  Instance tb;
  GreedySplit g;
  partition::WeightPartition wp;
};

Prepared prepare(const std::vector<Item>& items, Weight t, double C) {
  Prepared p;
  p.tb = break_ties(normalize(items, t));
  p.g = greedy_split(p.tb);
  p.wp = partition::weight_partition(p.tb, p.g, C);
  return p;
}

}  // namespace

TEST_CASE("first stage holds an I_W1-optimal entry and only valid entries") {
  std::mt19937_64 rng(404);
  int checked = 0;
  for (int round = 0; round < 300 && checked < 120; ++round) {
    auto items = oracle::random_mixed(rng, 4 + rng() % 11, 2 + rng() % 5, 1 + rng() % 20, round % 3);
    Weight t = random_capacity(rng, items, 40);
    Instance inst = normalize(items, t);
    if (inst.all_fit || inst.size() == 0) continue;
    if (static_cast<Wide>(inst.w_max) > static_cast<Wide>(inst.size() * inst.size())) continue;
    auto P = prepare(items, t, 0.5);
    auto plan = stage::make_plan(P.tb, P.g, P.wp.part(1), 0.5);
    DpTable q = stage::first_stage(plan, {});
    ++checked;

    // Enumerate exchange solutions of the primed instance.
    const auto& it = P.tb.items;
    const std::size_t n = it.size();
    std::vector<char> inW1(n);
    for (std::size_t i = 0; i < n; ++i)
      inW1[i] = std::binary_search(plan.W1.begin(), plan.W1.end(), it[i].weight);
    Wide best = 0;
    std::vector<std::uint64_t> optimal;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      Weight w = 0;
      Wide p = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) w += it[i].weight, p += it[i].profit;
      if (w > t) continue;
      if (optimal.empty() || p > best) best = p, optimal.clear();
      if (p == best) optimal.push_back(mask);
    }
    // restriction of each optimum to I_W1, as (z, profit) relative to G
    bool found = false;
    for (std::uint64_t mask : optimal) {
      Weight z = 0;
      Wide v = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!inW1[i]) continue;
        bool chosen = mask >> i & 1;
        if (chosen && !P.g.in_greedy[i]) z += it[i].weight, v += it[i].profit;
        if (!chosen && P.g.in_greedy[i]) z -= it[i].weight, v -= it[i].profit;
      }
      if (q.at(z) == Profit(v)) found = true;
    }
    INFO("round " << round);
    CHECK(found);
    // validity: no entry beats the best partial solution of its weight
    for (std::int64_t z = -q.half_size(); z <= q.half_size(); ++z) {
      if (q[z].is_bottom()) continue;
      Profit cap = Profit::bottom();
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (inW1[i]) idx.push_back(i);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << idx.size()); ++m) {
        Weight zz = 0;
        Wide v = 0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
          bool flip = m >> a & 1;
          if (!flip) continue;
          std::size_t i = idx[a];
          if (P.g.in_greedy[i]) zz -= it[i].weight, v -= it[i].profit;
          else zz += it[i].weight, v += it[i].profit;
        }
        if (zz == z) cap = max(cap, Profit(v));
      }
      CHECK(q[z] <= cap);
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("phases respect hint budgets and the scheduled sizes") {
  std::mt19937_64 rng(505);
  for (int round = 0; round < 30; ++round) {
    auto items = oracle::random_mixed(rng, 30 + rng() % 60, 3 + rng() % 10, 1 + rng() % 50, round % 3);
    Weight t = random_capacity(rng, items, 300);
    Instance inst = normalize(items, t);
    if (inst.all_fit) continue;
    auto P = prepare(items, t, 1.0);
    auto plan = stage::make_plan(P.tb, P.g, P.wp.part(1), 1.0);
    const auto& ps = plan.schedule;
    for (bool clamp : {false, true}) {
      SolverConfig cfg;
      cfg.clamp_to_reachable = clamp;
      auto cur = stage::initial_table(plan.W1, clamp ? 0 : ps.L[0]);
      for (int j = 1; j <= ps.k; ++j) {
        cur = stage::propagate_phase(plan, j, smawk::Direction::positive, cur, cfg);
        if (!clamp) CHECK(cur.half_size() == ps.L[static_cast<std::size_t>(j)]);
        CHECK(cur.half_size() <= ps.L[static_cast<std::size_t>(j)]);
        for (std::int64_t z = -cur.half_size(); z <= cur.half_size(); ++z) {
          if (cur.q[z].is_bottom()) continue;
          CHECK(static_cast<std::int64_t>(cur.positive_hint(z).size()) <= ps.b[static_cast<std::size_t>(j + 1)]);
          CHECK(static_cast<std::int64_t>(cur.negative_hint(z).size()) <= ps.b[static_cast<std::size_t>(j)]);
        }
        cur = stage::propagate_phase(plan, j, smawk::Direction::negative, cur, cfg);
        if (!clamp) CHECK(cur.half_size() == ps.L[static_cast<std::size_t>(j)]);
        for (std::int64_t z = -cur.half_size(); z <= cur.half_size(); ++z) {
          if (cur.q[z].is_bottom()) continue;
          CHECK(static_cast<std::int64_t>(cur.positive_hint(z).size()) <= ps.b[static_cast<std::size_t>(j + 1)]);
          CHECK(static_cast<std::int64_t>(cur.negative_hint(z).size()) <= ps.b[static_cast<std::size_t>(j + 1)]);
        }
      }
    }
  }
}

TEST_CASE("propagate phase: a single positive item lands at its weight") {
  // G = the two weight-1 items; (3,5) stays outside; W1 holds every weight
  auto items = items_of({{3, 5}, {1, 2}, {1, 2}, {2, 3}});
  auto P = prepare(items, 3, 1.0);
  auto plan = stage::make_plan(P.tb, P.g, P.wp.part(1), 1.0);
  auto cur = stage::initial_table(plan.W1, 0);
  cur = stage::propagate_phase(plan, 1, smawk::Direction::positive, cur, {});
  std::size_t heavy = 0;
  for (std::size_t i = 0; i < P.tb.items.size(); ++i)
    if (P.tb.items[i].weight == 3) heavy = i;
  REQUIRE_FALSE(P.g.in_greedy[heavy]);
  CHECK(cur.q.at(3) >= cur.q.at(0) + Profit(P.tb.items[heavy].profit));
}

TEST_CASE("in-place class update matches the naive batch update") {
  std::mt19937_64 rng(606);
  for (int round = 0; round < 300; ++round) {
    std::int64_t L = 1 + static_cast<std::int64_t>(rng() % 25);
    DpTable q(L);
    for (std::int64_t z = -L; z <= L; ++z)
      if (rng() % 3) q[z] = Profit(static_cast<Wide>(rng() % 100) - 50);
    Weight w = 1 + static_cast<Weight>(rng() % 6);
    auto Qv = oracle::random_concave(rng, static_cast<std::int64_t>(rng() % 5), 20);
    ConcaveProfitFn Q(Qv);
    bool positive = rng() % 2;
    DpTable a = q;
    stage::update_in_place(a, w, Q, positive);
    CHECK(a == oracle::naive_batch(q, w, Qv, L, positive ? 1 : -1));
  }
}
