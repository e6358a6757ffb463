#include "knapsack/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace knapsack::partition {

namespace {

long double log2_at_least_one(long double x) { return std::max<long double>(1.0L, std::log2(x)); }

std::int64_t ceil_to_int(long double v) {
  long double c = std::ceil(v - 1e-12L * std::max<long double>(1.0L, v));
  return static_cast<std::int64_t>(c);
}

}  // namespace

double weight_threshold(Weight w_max, double C, int j) {
  long double w = static_cast<long double>(w_max);
  return static_cast<double>(2.0L * C * std::sqrt(w * log2_at_least_one(w)) * std::ldexp(1.0L, j));
}

int partition_depth(Weight w_max, double C) {
  if (C <= 0) throw std::invalid_argument("structural constant must be positive");
  int s = 1;
  while (weight_threshold(w_max, C, s) < static_cast<double>(w_max)) ++s;
  return s;
}

WeightPartition weight_partition(const Instance& inst, const GreedySplit& g, double C) {
  WeightPartition wp;
  wp.s = partition_depth(inst.w_max, C);
  const std::size_t n = g.order.size();
  const std::size_t istar = g.break_index;  // G = order[0 .. istar)
  std::vector<char> seen_total(static_cast<std::size_t>(inst.w_max) + 1, 0);
  std::vector<std::int64_t> left_count(static_cast<std::size_t>(inst.w_max) + 1, 0);
  std::vector<std::int64_t> right_count(static_cast<std::size_t>(inst.w_max) + 1, 0);
  auto weight_at = [&](std::size_t pos) { return static_cast<std::size_t>(inst.items[g.order[pos]].weight); };

  // Windows grow monotonically with j, so one outward sweep per side suffices.
  std::size_t l = istar, r = istar;  // left covers [l, istar), right covers [istar, r)
  std::int64_t ldist = 0, rdist = 0;
  for (int j = 1; j <= wp.s; ++j) {
    double T = weight_threshold(inst.w_max, C, j);
    if (j == wp.s) T = static_cast<double>(n) + 1;  // the last window spans everything
    while (l > 0) {
      std::size_t w = weight_at(l - 1);
      std::int64_t nd = ldist + (left_count[w] == 0);
      if (static_cast<double>(nd) > T && l < istar) break;
      ++left_count[w];
      ldist = nd;
      --l;
    }
    while (r < n) {
      std::size_t w = weight_at(r);
      std::int64_t nd = rdist + (right_count[w] == 0);
      if (static_cast<double>(nd) > T && r > istar) break;
      ++right_count[w];
      rdist = nd;
      ++r;
    }
    wp.left.push_back(l);
    wp.right.push_back(r - 1);
    std::vector<Weight> part;
    for (std::size_t w = 1; w <= static_cast<std::size_t>(inst.w_max); ++w)
      if ((left_count[w] || right_count[w]) && !seen_total[w]) {
        seen_total[w] = 1;
        part.push_back(static_cast<Weight>(w));
      }
    wp.parts.push_back(std::move(part));
  }
  return wp;
}

int rank_levels(Weight w_max) {
  int k = 0;
  while ((std::int64_t{1} << k) < 2 * w_max + 1) ++k;
  return std::max(k, 1);
}

RankPartition rank_partition(const Instance& inst, const GreedySplit& g, const std::vector<Weight>& W1) {
  RankPartition rp;
  rp.k = rank_levels(inst.w_max);
  rp.positive.assign(static_cast<std::size_t>(rp.k), {});
  rp.negative.assign(static_cast<std::size_t>(rp.k), {});
  auto level = [](std::size_t rank) {
    int j = 0;
    while ((std::size_t{1} << j) <= rank) ++j;
    return j;  // 2^{j-1} <= rank <= 2^j - 1
  };
  for (Weight w : W1) {
    const WeightClass* c = g.find_class(w);
    if (!c) continue;
    for (std::size_t r = 0; r < c->outside.size(); ++r) {
      int j = level(r + 1);
      if (j <= rp.k) rp.positive[static_cast<std::size_t>(j - 1)].push_back(c->outside[r]);
    }
    for (std::size_t r = 0; r < c->inside.size(); ++r) {
      int j = level(r + 1);
      if (j <= rp.k) rp.negative[static_cast<std::size_t>(j - 1)].push_back(c->inside[r]);
    }
  }
  return rp;
}

PhaseSchedule phase_schedule(Weight w_max, double C, std::size_t W1_size) {
  if (w_max < 1) throw std::invalid_argument("w_max must be positive");
  if (C <= 0) throw std::invalid_argument("structural constant must be positive");
  PhaseSchedule ps;
  ps.C = C;
  ps.k = rank_levels(w_max);
  ps.s = partition_depth(w_max, C);
  const long double w = static_cast<long double>(w_max);
  const long double root = std::sqrt(w * std::log2(2.0L * w));
  const std::int64_t W1 = static_cast<std::int64_t>(W1_size);
  // No partial exchange solution of an optimal one reaches beyond 2 w_max^2,
  // and hint sets never exceed |W1|, so both caps below are lossless.
  const std::int64_t m_cap = 2 * w_max;
  for (int j = 0; j <= ps.k; ++j) {
    std::int64_t m = ceil_to_int(C * std::pow(2.0L, j / 2.0L) * root);
    ps.m.push_back(std::clamp<std::int64_t>(m, 1, m_cap));
    ps.L.push_back(ps.m.back() * w_max);
  }
  for (int j = 0; j <= ps.k + 1; ++j) {
    std::int64_t b = ceil_to_int(C * std::pow(2.0L, -j / 2.0L) * root);
    if (j <= 1) b = std::max(b, W1);
    ps.b.push_back(std::max<std::int64_t>(1, std::min(b, std::max<std::int64_t>(W1, 1))));
  }
  const long double w15 = w * std::sqrt(w);
  for (int j = 0; j <= ps.s; ++j) {
    auto v = static_cast<std::int64_t>(std::floor(4.0L * C * w15 / std::pow(2.0L, j))) + w_max;
    ps.L_second.push_back(std::min(v, 2 * w_max * w_max));
  }
  return ps;
}

}  // namespace knapsack::partition
