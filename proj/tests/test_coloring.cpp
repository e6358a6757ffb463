#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "knapsack/coloring.hpp"

using namespace knapsack::extend;

namespace {

SetSystem random_system(std::mt19937_64& rng, std::int64_t n, std::int64_t m, std::int64_t b) {
  SetSystem s(static_cast<std::size_t>(m));
  for (auto& set : s) {
    std::int64_t size = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(std::min(b, n) + 1));
    std::set<std::int64_t> pick;
    while (static_cast<std::int64_t>(pick.size()) < size) pick.insert(static_cast<std::int64_t>(rng() % n));
    set.assign(pick.begin(), pick.end());
  }
  return s;
}

bool isolates(const std::vector<std::int64_t>& h, const std::vector<std::int64_t>& s) {
  std::set<std::int64_t> colors;
  for (auto e : s) colors.insert(h[e]);
  return colors.size() == s.size();
}

}  // namespace

TEST_CASE("set balancing examples") {
  auto x = det_set_balancing({{0, 1}}, 2, 2);
  CHECK(std::abs(x[0] + x[1]) <= 4 * std::sqrt(2 * std::log(2.0)));
  auto y = det_set_balancing({{0}, {1}, {2}}, 3, 1);
  for (int v : y) CHECK(std::abs(v) == 1);
}

TEST_CASE("set balancing discrepancy on random systems") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 200);
    std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 100);
    std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 32);
    auto sys = random_system(rng, n, m, b);
    auto x = det_set_balancing(sys, n, b);
    double bound = 4 * std::sqrt(b * std::log(2.0 * m));
    for (const auto& s : sys) {
      long sum = 0;
      for (auto e : s) sum += x[e];
      CHECK(std::abs(sum) <= bound);
    }
  }
}

TEST_CASE("balls and bins") {
  SetSystem one{{0, 1, 2, 3, 4, 5, 6, 7}};
  auto c = det_balls_and_bins(one, 8, 2);
  int count[2] = {0, 0};
  for (auto v : c) ++count[v];
  CHECK(count[0] + count[1] == 8);
  CHECK(count[0] <= 12);
  CHECK(count[1] <= 12);
  // r = 5 rounds down to 4 colors
  for (auto v : det_balls_and_bins(one, 8, 5)) CHECK(v < 4);

  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 500);
    std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 200);
    std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 16);
    std::int64_t b = std::max<std::int64_t>(1, static_cast<std::int64_t>(r * std::log2(2.0 * m)));
    auto sys = random_system(rng, n, m, b);
    auto col = det_balls_and_bins(sys, n, r, 12.0);
    double limit = 12.0 * std::log2(2.0 * m);
    for (const auto& s : sys) {
      std::vector<int> cnt(16, 0);
      for (auto e : s) ++cnt[col[e]];
      for (int v : cnt) CHECK(v <= limit);
    }
  }
}

TEST_CASE("balls and bins rejects a zero beta") {
  SetSystem one{{0, 1, 2, 3}};
  CHECK_THROWS_AS(det_balls_and_bins(one, 4, 2, 0.0), std::runtime_error);
}

TEST_CASE("isolating colorings") {
  auto h = det_isolating_colorings({{0, 1}}, 2, 2);
  REQUIRE(!h.empty());
  bool ok = false;
  for (auto& c : h) {
    ok = ok || c[0] != c[1];
    for (auto v : c) CHECK(v < 4);
  }
  CHECK(ok);
  CHECK(det_isolating_colorings({{0}, {1}}, 2, 1).size() == 1);

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100);
    std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 100);
    std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 10);
    auto sys = random_system(rng, n, m, b);
    auto hs = det_isolating_colorings(sys, n, b);
    CHECK(static_cast<double>(hs.size()) <= std::log2(2.0 * m));
    for (const auto& s : sys) {
      bool any = false;
      for (auto& c : hs) any = any || isolates(c, s);
      CHECK(any);
    }
    for (auto& c : hs)
      for (auto v : c) CHECK(v < b * b);
  }
}
