#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "knapsack/profit.hpp"

namespace knapsack {

using Weight = std::int64_t;

struct Item {
  Weight weight = 1;
  Wide profit = 1;
};

struct Instance {
  std::vector<Item> items;
  Weight capacity = 0;
  Weight w_max = 0;
  bool all_fit = false;
  bool tie_broken = false;
  std::optional<Wide> tie_break_M;
  // Sum of all profits; the answer when all_fit holds.
  Wide total_profit = 0;

  std::size_t size() const { return items.size(); }
};

// Drops items heavier than t. Throws std::invalid_argument on t < 0 or
// non-positive weights/profits.
Instance normalize(std::span<const Item> raw, Weight t);

// Perturbs profits to p' = (p*M + i)*w_max + 1 with i 1-based, making all
// profits and efficiencies distinct. Throws std::overflow_error when the
// perturbed sums no longer fit.
Instance break_ties(const Instance& inst);

Profit recover_profit(Profit total_primed, Wide M, Weight w_max);

// Items of one weight class on one side of the greedy split, ordered by
// rank (rank r sits at position r-1). Capped at 2^k - 1 >= 2*w_max entries,
// k = ceil(log2(2 w_max + 1)).
struct WeightClass {
  Weight weight = 0;
  std::vector<std::size_t> outside;  // not in G, profit descending
  std::vector<std::size_t> inside;   // in G, profit ascending
};

struct GreedySplit {
  std::vector<std::size_t> order;  // item indices by decreasing efficiency
  std::vector<char> in_greedy;
  std::size_t break_index = 0;  // |G|; G = order[0 .. break_index)
  Weight greedy_weight = 0;
  Wide greedy_profit = 0;
  std::vector<std::int64_t> rank;       // 1-based rank within the item's side
  std::vector<WeightClass> classes;     // ascending weight

  const WeightClass* find_class(Weight w) const;
};

GreedySplit greedy_split(const Instance& inst);

}  // namespace knapsack
