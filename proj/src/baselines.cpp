#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "knapsack/smawk.hpp"
#include "knapsack/solver.hpp"

namespace knapsack {

namespace {

template <class T>
T bellman_table(const std::vector<Item>& items, Weight t) {
  std::vector<T> dp(static_cast<std::size_t>(t) + 1, 0);
  for (const Item& it : items) {
    const auto w = static_cast<std::size_t>(it.weight);
    const T p = static_cast<T>(it.profit);
    T* hi = dp.data() + w;
    const T* base = dp.data();
    for (std::size_t c = static_cast<std::size_t>(t) + 1 - w; c-- > 0;) hi[c] = std::max(hi[c], base[c] + p);
  }
  return dp[static_cast<std::size_t>(t)];
}

}  // namespace

Wide solve_bellman(std::span<const Item> items, Weight t, std::int64_t budget, SolverStats* stats) {
  Instance inst = normalize(items, t);
  if (inst.size() == 0) return 0;
  if (inst.all_fit) return inst.total_profit;
  if (static_cast<Wide>(inst.size()) * (static_cast<Wide>(t) + 1) > budget)
    throw SolverRefusal("Bellman DP over budget: n*(t+1) exceeds " + std::to_string(budget));
  if (stats) stats->table(t + 1);
  if (inst.total_profit < (Wide{1} << 62)) return bellman_table<std::int64_t>(inst.items, t);
  return bellman_table<Wide>(inst.items, t);
}

Wide solve_proximity_smawk(std::span<const Item> items, Weight t, SolverStats* stats) {
  Instance inst = normalize(items, t);
  if (inst.size() == 0) return 0;
  if (inst.all_fit) return inst.total_profit;
  Instance tb = break_ties(inst);
  GreedySplit g = greedy_split(tb);
  // An optimal exchange solution (A, B) has W(A) + W(B) <= 2 w_max^2, which
  // bounds every partial sum.
  const std::int64_t L = 2 * tb.w_max * tb.w_max;
  DpTable q(L);
  q[0] = Profit(0);
  if (stats) stats->table(q.cells());
  for (const WeightClass& c : g.classes) {
    for (bool positive : {true, false}) {
      const auto& side = positive ? c.outside : c.inside;
      if (side.empty()) continue;
      std::vector<Wide> inc;
      for (std::size_t idx : side) inc.push_back(positive ? tb.items[idx].profit : -tb.items[idx].profit);
      ConcaveProfitFn Q = ConcaveProfitFn::from_increments(inc);
      q = smawk::batch_update_weight_class(q, c.weight, Q, Q.cap(), L,
                                           positive ? smawk::Direction::positive : smawk::Direction::negative);
    }
  }
  const std::int64_t room = tb.capacity - g.greedy_weight;
  Profit best = Profit::bottom();
  for (std::int64_t z = -L; z <= std::min(L, room); ++z) best = max(best, q[z]);
  Profit primed = Profit(g.greedy_profit) + best;
  return recover_profit(primed, *tb.tie_break_M, tb.w_max).value();
}

Wide solve_exhaustive_direct(std::span<const Item> items, Weight t) {
  Instance inst = normalize(items, t);
  const std::size_t n = inst.size();
  if (n > 24) throw SolverRefusal("direct enumeration limited to 24 items");
  // Gray code: one item flips per step.
  Wide best = 0, p = 0;
  Weight w = 0;
  std::vector<char> in(n, 0);
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    auto bit = static_cast<std::size_t>(__builtin_ctzll(step));
    const Item& it = inst.items[bit];
    if (in[bit]) {
      w -= it.weight;
      p -= it.profit;
    } else {
      w += it.weight;
      p += it.profit;
    }
    in[bit] ^= 1;
    if (w <= t && p > best) best = p;
  }
  return best;
}

namespace {

std::vector<std::pair<Weight, Wide>> subset_sums(std::span<const Item> items) {
  std::vector<std::pair<Weight, Wide>> out{{0, 0}};
  out.reserve(std::size_t{1} << items.size());
  for (const Item& it : items) {
    const std::size_t m = out.size();
    for (std::size_t i = 0; i < m; ++i) out.emplace_back(out[i].first + it.weight, out[i].second + it.profit);
  }
  return out;
}

}  // namespace

Wide solve_meet_in_middle(std::span<const Item> items, Weight t) {
  Instance inst = normalize(items, t);
  const std::size_t n = inst.size();
  if (n > 40) throw SolverRefusal("meet in the middle limited to 40 items");
  std::span<const Item> all(inst.items);
  auto left = subset_sums(all.first(n / 2));
  auto right = subset_sums(all.subspan(n / 2));
  std::sort(right.begin(), right.end());
  for (std::size_t i = 1; i < right.size(); ++i) right[i].second = std::max(right[i].second, right[i - 1].second);
  Wide best = 0;
  for (auto [w, p] : left) {
    if (w > t) continue;
    auto it = std::upper_bound(right.begin(), right.end(), t - w,
                               [](Weight cap, const std::pair<Weight, Wide>& e) { return cap < e.first; });
    if (it != right.begin()) best = std::max(best, p + std::prev(it)->second);
  }
  return best;
}

Wide solve_exhaustive(std::span<const Item> items, Weight t) {
  Instance inst = normalize(items, t);
  if (inst.size() <= 24) return solve_exhaustive_direct(inst.items, t);
  return solve_meet_in_middle(inst.items, t);
}

}  // namespace knapsack
