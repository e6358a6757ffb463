#pragma once

#include <cstdint>
#include <string>

// Oracle-backed property suites shared by `knapsack selftest` and the
// acceptance runner. Each returns how many cases ran and how many failed.

namespace knapsack::suites {

struct Outcome {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::string note;  // first failure, or a measured quantity
  bool pass() const { return cases > 0 && failures == 0; }
};

// solve_fast against exhaustive enumeration; n <= 16, w_max <= 12,
// p_max <= 20, t <= 60, all three generator distributions.
Outcome exhaustive_equivalence(int count, std::uint64_t seed);

// solve_fast and solve_proximity_smawk against Bellman; n <= max_n,
// w_max <= max_w, t <= sum of weights.
Outcome bellman_equivalence(int count, std::uint64_t seed, std::int64_t max_n = 2000, std::int64_t max_w = 100);

// row_maxima against a naive leftmost scan on convex Monge staircases with
// m <= 200, n <= 50. Fails when evaluations exceed c_limit * n(1+log2 ceil(m/n)).
Outcome smawk_oracle(int count, std::uint64_t seed, double c_limit = 10.0);

// solve_singleton (b = 1), solve_small_b and solve (b in {1,2,3,5}), count
// instances each, through the relaxed checker. L <= 30, |U| <= 6.
Outcome extend_contract(int count, std::uint64_t seed, double beta = 12.0);

// compose over disjoint (V, V') and entry-wise max over (K, K'), count of
// each, through the relaxed checker.
Outcome composition(int count, std::uint64_t seed);

// Set balancing, balls-and-bins and isolating colorings checked by
// counting, count systems each. beta is handed to balls-and-bins.
Outcome coloring(int count, std::uint64_t seed, double beta = 12.0);

// Distinct primed profits and efficiencies, and recover_profit of the
// primed optimum equal to the plain optimum (exhaustive, n <= 12).
Outcome tie_breaking(int count, std::uint64_t seed);

}  // namespace knapsack::suites
