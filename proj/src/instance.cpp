#include "knapsack/instance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "knapsack/dp_table.hpp"

namespace knapsack {

Instance normalize(std::span<const Item> raw, Weight t) {
  if (t < 0) throw std::invalid_argument("capacity must be non-negative");
  Instance inst;
  inst.capacity = t;
  Wide weight_sum = 0;
  for (const Item& it : raw) {
    if (it.weight < 1 || it.profit < 1) throw std::invalid_argument("item weight and profit must be >= 1");
    if (it.weight > t) continue;
    inst.items.push_back(it);
    inst.w_max = std::max(inst.w_max, it.weight);
    weight_sum += it.weight;
    inst.total_profit = checked_add(inst.total_profit, it.profit);
  }
  inst.all_fit = weight_sum <= t;
  return inst;
}

Instance break_ties(const Instance& inst) {
  if (inst.all_fit) throw std::invalid_argument("break_ties needs a nontrivial instance");
  Instance out = inst;
  const Wide n = static_cast<Wide>(inst.size());
  const Wide M = 1 + n + n * (n + 1) / 2;
  const Wide w = inst.w_max;
  Wide max_p = 0;
  out.total_profit = 0;
  for (std::size_t k = 0; k < out.items.size(); ++k) {
    Wide i = static_cast<Wide>(k + 1);
    Wide p = checked_add(checked_mul(checked_add(checked_mul(inst.items[k].profit, M), i), w), 1);
    out.items[k].profit = p;
    max_p = std::max(max_p, p);
    out.total_profit = checked_add(out.total_profit, p);
  }
  // Sums over all items must fit, as must efficiency cross products and the
  // spread-based penalties used by the DP updates.
  (void)checked_mul(checked_mul(max_p, std::max<Wide>(n, 1)), 64);
  (void)checked_mul(checked_mul(max_p, w), 4);
  out.tie_broken = true;
  out.tie_break_M = M;
  return out;
}

Profit recover_profit(Profit total_primed, Wide M, Weight w_max) {
  if (total_primed.is_bottom()) return total_primed;
  Wide d = checked_mul(M, w_max);
  Wide v = total_primed.value();
  Wide q = v / d;
  if (v % d != 0 && v < 0) --q;
  return Profit(q);
}

const WeightClass* GreedySplit::find_class(Weight w) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), w,
                             [](const WeightClass& c, Weight x) { return c.weight < x; });
  return it != classes.end() && it->weight == w ? &*it : nullptr;
}

GreedySplit greedy_split(const Instance& inst) {
  const auto& items = inst.items;
  const std::size_t n = items.size();
  GreedySplit g;
  g.order.resize(n);
  std::iota(g.order.begin(), g.order.end(), std::size_t{0});
  std::stable_sort(g.order.begin(), g.order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].profit * items[b].weight > items[b].profit * items[a].weight;
  });
  g.in_greedy.assign(n, 0);
  for (std::size_t idx : g.order) {
    if (g.greedy_weight + items[idx].weight > inst.capacity) break;
    g.in_greedy[idx] = 1;
    g.greedy_weight += items[idx].weight;
    g.greedy_profit += items[idx].profit;
    ++g.break_index;
  }

  std::vector<std::size_t> by_weight(n);
  std::iota(by_weight.begin(), by_weight.end(), std::size_t{0});
  std::sort(by_weight.begin(), by_weight.end(), [&](std::size_t a, std::size_t b) {
    if (items[a].weight != items[b].weight) return items[a].weight < items[b].weight;
    if (items[a].profit != items[b].profit) return items[a].profit > items[b].profit;
    return a < b;
  });
  g.rank.assign(n, 0);
  // Keep ranks up to 2^k - 1 with k = ceil(log2(2 w_max + 1)), the smallest
  // dyadic bound covering the 2 w_max ranks an optimal solution may use.
  std::size_t cap = 1;
  while (cap < static_cast<std::size_t>(2 * inst.w_max + 1)) cap <<= 1;
  cap -= 1;
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s;
    WeightClass cls;
    cls.weight = items[by_weight[s]].weight;
    std::vector<std::size_t> in;
    std::int64_t out_rank = 0;
    while (e < n && items[by_weight[e]].weight == cls.weight) {
      std::size_t idx = by_weight[e++];
      if (g.in_greedy[idx]) {
        in.push_back(idx);
      } else {
        g.rank[idx] = ++out_rank;
        if (cls.outside.size() < cap) cls.outside.push_back(idx);
      }
    }
    // in is profit-descending; ranks inside G run by ascending profit
    std::reverse(in.begin(), in.end());
    for (std::size_t r = 0; r < in.size(); ++r) {
      g.rank[in[r]] = static_cast<std::int64_t>(r + 1);
      if (r < cap) cls.inside.push_back(in[r]);
    }
    g.classes.push_back(std::move(cls));
    s = e;
  }
  return g;
}

DpTable dp_resize(const DpTable& q, std::int64_t new_half_size) {
  if (new_half_size < 0) throw std::invalid_argument("negative table size");
  DpTable out(new_half_size);
  std::int64_t keep = std::min(q.half_size(), new_half_size);
  for (std::int64_t z = -keep; z <= keep; ++z) out[z] = q[z];
  return out;
}

}  // namespace knapsack
