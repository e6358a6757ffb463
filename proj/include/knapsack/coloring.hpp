#pragma once

#include <cstdint>
#include <vector>

namespace knapsack::extend {

// A set system over the ground set [0, n).
using SetSystem = std::vector<std::vector<std::int64_t>>;

// Signs in {+1, -1} with |sum over S_i| <= 4 sqrt(b ln(2m)) for every set,
// chosen greedily against an exponential pessimistic estimator.
std::vector<int> det_set_balancing(const SetSystem& sets, std::int64_t n, std::int64_t b);

// Coloring into r' colors, r' the largest power of two <= r, by recursive
// halving with set balancing. Throws std::runtime_error if some set meets
// some color class in more than beta * log2(2m) elements.
std::vector<std::int64_t> det_balls_and_bins(const SetSystem& sets, std::int64_t n, std::int64_t r,
                                             double beta = 12.0);

// Colorings h_1..h_k into [b^2] such that every set gets pairwise distinct
// colors under some h_j; each round isolates more than half of the sets
// still pending, so k <= log2(2m). Always returns at least one coloring.
std::vector<std::vector<std::int64_t>> det_isolating_colorings(const SetSystem& sets, std::int64_t n,
                                                               std::int64_t b);

}  // namespace knapsack::extend
