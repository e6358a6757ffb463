#pragma once

// Slow reference implementations used only by tests.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include "knapsack/dp_table.hpp"
#include "knapsack/instance.hpp"
#include "knapsack/profit.hpp"
#include "knapsack/smawk.hpp"

namespace knapsack {
inline std::ostream& operator<<(std::ostream& os, Profit p) { return os << to_string(p); }
}  // namespace knapsack

namespace oracle {

using knapsack::DpTable;
using knapsack::Item;
using knapsack::Profit;
using knapsack::Wide;

inline std::vector<std::int64_t> naive_row_argmax(std::int64_t m, std::int64_t n,
                                                  const std::vector<std::vector<Profit>>& a) {
  std::vector<std::int64_t> arg(m, 0);
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 1; j < n; ++j)
      if (a[i][arg[i]] < a[i][j]) arg[i] = j;
  return arg;
}

inline std::vector<Profit> naive_conv(const std::vector<Profit>& a, const std::vector<Profit>& b) {
  std::vector<Profit> c(a.size() + b.size() - 1, Profit::bottom());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = knapsack::max(c[i + j], a[i] + b[j]);
  return c;
}

// Concave sequence with b[0] = 0: random nonincreasing increments.
inline std::vector<Profit> random_concave(std::mt19937_64& rng, std::int64_t len, std::int64_t spread) {
  std::vector<std::int64_t> inc(len);
  for (auto& d : inc) d = static_cast<std::int64_t>(rng() % (2 * spread + 1)) - spread / 2;
  std::sort(inc.rbegin(), inc.rend());
  std::vector<Profit> b{Profit(0)};
  for (auto d : inc) b.push_back(b.back() + Profit(d));
  return b;
}

inline DpTable naive_batch(const DpTable& q, std::int64_t w, const std::vector<Profit>& Q,
                           std::int64_t new_half, int sign) {
  DpTable out(new_half);
  for (std::int64_t z = -q.half_size(); z <= q.half_size(); ++z)
    for (std::int64_t x = 0; x < static_cast<std::int64_t>(Q.size()); ++x) {
      std::int64_t t = z + sign * x * w;
      if (t < -new_half || t > new_half) continue;
      out[t] = knapsack::max(out[t], q[z] + Q[x]);
    }
  return out;
}

// Best total profit over subsets with weight <= t, by direct enumeration.
inline Wide brute_force(const std::vector<Item>& items, std::int64_t t) {
  Wide best = 0;
  const std::size_t n = items.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t w = 0;
    Wide p = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += items[i].weight, p += items[i].profit;
    if (w <= t) best = std::max(best, p);
  }
  return best;
}

inline std::vector<Item> random_items(std::mt19937_64& rng, std::size_t n, std::int64_t wmax,
                                      std::int64_t pmax) {
  std::vector<Item> items(n);
  for (auto& it : items) {
    it.weight = 1 + static_cast<std::int64_t>(rng() % wmax);
    it.profit = 1 + static_cast<Wide>(rng() % pmax);
  }
  return items;
}

// kind 0: uniform, 1: profit roughly proportional to weight, 2: few
// distinct weights with many items each.
inline std::vector<Item> random_mixed(std::mt19937_64& rng, std::size_t n, std::int64_t wmax, std::int64_t pmax,
                                      int kind) {
  std::vector<Item> items(n);
  std::vector<std::int64_t> palette;
  for (int i = 0; i < 3; ++i) palette.push_back(1 + static_cast<std::int64_t>(rng() % wmax));
  for (auto& it : items) {
    if (kind == 2) {
      it.weight = palette[rng() % palette.size()];
    } else {
      it.weight = 1 + static_cast<std::int64_t>(rng() % wmax);
    }
    if (kind == 1) {
      std::int64_t base = std::max<std::int64_t>(1, it.weight * pmax / wmax);
      it.profit = std::max<std::int64_t>(1, base + static_cast<std::int64_t>(rng() % 3) - 1);
    } else {
      it.profit = 1 + static_cast<Wide>(rng() % pmax);
    }
  }
  return items;
}

}  // namespace oracle
