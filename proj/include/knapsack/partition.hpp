#pragma once

#include <cstdint>
#include <vector>

#include "knapsack/instance.hpp"

namespace knapsack::partition {

struct WeightPartition {
  std::vector<std::vector<Weight>> parts;  // parts[j-1] = W_j, each ascending
  int s = 1;
  // [left[j-1], right[j-1]]: window of positions in efficiency order
  // (0-based, inclusive) whose weights make up W_{<=j}
  std::vector<std::size_t> left, right;

  const std::vector<Weight>& part(int j) const { return parts[static_cast<std::size_t>(j - 1)]; }
};

// Distinct-weight threshold 2C*sqrt(w log2 w)*2^j, with log2 w clamped to 1.
double weight_threshold(Weight w_max, double C, int j);
// Smallest s >= 1 whose threshold reaches w_max.
int partition_depth(Weight w_max, double C);

WeightPartition weight_partition(const Instance& inst, const GreedySplit& g, double C);

struct RankPartition {
  int k = 1;
  // positive[j-1] = J_j^+, negative[j-1] = J_j^-; item indices
  std::vector<std::vector<std::size_t>> positive, negative;
};

int rank_levels(Weight w_max);  // ceil(log2(2 w_max + 1))

RankPartition rank_partition(const Instance& inst, const GreedySplit& g, const std::vector<Weight>& W1);

struct PhaseSchedule {
  double C = 2.0;
  int k = 1;
  int s = 1;
  std::vector<std::int64_t> m;         // j = 0..k
  std::vector<std::int64_t> b;         // j = 0..k+1
  std::vector<std::int64_t> L;         // j = 0..k, L_j = m_j * w_max
  std::vector<std::int64_t> L_second;  // j = 0..s, stage-two sizes L'_j
};

PhaseSchedule phase_schedule(Weight w_max, double C, std::size_t W1_size);

}  // namespace knapsack::partition
