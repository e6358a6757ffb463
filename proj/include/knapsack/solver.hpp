#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "knapsack/dp_table.hpp"
#include "knapsack/hinted_extend.hpp"
#include "knapsack/instance.hpp"
#include "knapsack/partition.hpp"
#include "knapsack/smawk.hpp"

namespace knapsack {

// A solver declined the instance (size budget).
class SolverRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VerifyMode { off, cross_check_bellman };

struct SolverConfig {
  double C = 2.0;  // structural constant
  double beta = 12.0;
  VerifyMode verify = VerifyMode::off;
  bool force_fallback = false;
  extend::Strategy strategy = extend::Strategy::automatic;
  // Caps every table at the span reachable from its finite entries. Never
  // changes the answer.
  bool clamp_to_reachable = true;
  // Largest n*(t+1) Bellman will accept, for the fallback and for verify.
  std::int64_t bellman_budget = std::int64_t{1} << 42;
};

struct SolverStats {
  std::string route;  // empty, all_fit, bellman_fallback, fast, ...
  std::int64_t peak_table_cells = 0;
  std::int64_t w1_size = 0;
  int k = 0;
  int s = 0;
  extend::ExtendStats extend;
  void table(std::int64_t cells) { peak_table_cells = std::max(peak_table_cells, cells); }
};

// Main algorithm. Returns the optimum profit.
Wide solve_fast(std::span<const Item> items, Weight t, const SolverConfig& cfg = {}, SolverStats* stats = nullptr);

// O(n t) capacity-indexed DP. Throws SolverRefusal when n*(t+1) > budget.
Wide solve_bellman(std::span<const Item> items, Weight t, std::int64_t budget = std::int64_t{1} << 42,
                   SolverStats* stats = nullptr);

// Greedy split plus one SMAWK batch update per (weight, side) over a table
// of half size 2 w_max^2.
Wide solve_proximity_smawk(std::span<const Item> items, Weight t, SolverStats* stats = nullptr);

// Subset enumeration for n <= 24, meet in the middle for n <= 40, after
// dropping items heavier than t. Throws SolverRefusal beyond that.
Wide solve_exhaustive(std::span<const Item> items, Weight t);
Wide solve_exhaustive_direct(std::span<const Item> items, Weight t);
Wide solve_meet_in_middle(std::span<const Item> items, Weight t);

namespace stage {

// DP table whose finite entries carry a positive and a negative hint.
struct HintedDpTable {
  DpTable q;
  std::vector<extend::SetStore::Handle> pos, neg;  // [z + L]
  std::shared_ptr<extend::SetStore> pos_store, neg_store;

  std::int64_t half_size() const { return q.half_size(); }
  std::vector<Weight> positive_hint(std::int64_t z) const;
  std::vector<Weight> negative_hint(std::int64_t z) const;
};

// Everything the first stage needs, built once from a tie-broken instance.
struct Plan {
  const Instance* inst = nullptr;
  const GreedySplit* greedy = nullptr;
  std::vector<Weight> W1;
  partition::RankPartition ranks;
  partition::PhaseSchedule schedule;
};

Plan make_plan(const Instance& tie_broken, const GreedySplit& g, const std::vector<Weight>& W1, double C);

// q[0] = 0 with both hints W1, padded to half size L.
HintedDpTable initial_table(const std::vector<Weight>& W1, std::int64_t L);

// Updates with J_j^+ (positive) or J_j^- (negative). The positive direction
// pads to L_j first; new hints follow the x-based rule and entries whose
// fresh hint exceeds b_{j+1} are dropped.
HintedDpTable propagate_phase(const Plan& plan, int j, smawk::Direction dir, const HintedDpTable& in,
                              const SolverConfig& cfg, SolverStats* stats = nullptr);

DpTable first_stage(const Plan& plan, const SolverConfig& cfg, SolverStats* stats = nullptr);

// Weight classes of W_2..W_s on top of the stage-one table. Returns the
// primed optimum P(G) + max_{z <= t - W(G)} q[z].
Wide second_stage(const Instance& tie_broken, const GreedySplit& g, const partition::WeightPartition& wp,
                  const partition::PhaseSchedule& ps, const DpTable& stage_one, SolverStats* stats = nullptr);

// In place q[z] = max_{0<=x<=cap} q[z -+ x w] + Q(x); direct scan, meant for
// small caps.
void update_in_place(DpTable& q, Weight w, const ConcaveProfitFn& Q, bool positive);

}  // namespace stage
}  // namespace knapsack
