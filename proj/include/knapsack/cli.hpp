#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "knapsack/instance.hpp"

namespace knapsack::cli {

// Malformed instance text; the message names the offending line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceData {
  std::vector<Item> items;
  Weight t = 0;
  bool operator==(const InstanceData& o) const;
};

// "n t" then n lines "w p"; lines starting with '#' and blank lines are
// skipped.
InstanceData parse_instance(std::istream& in);
InstanceData parse_instance_text(const std::string& text);
std::string format_instance(const InstanceData& inst);

// SplitMix64 (Steele, Lea, Flood): state += 0x9E3779B97F4A7C15, then the
// 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB finalizer. below(r) maps a draw
// to [0, r) as floor(draw * r / 2^64).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t r);

 private:
  std::uint64_t state_;
};

enum class Dist { uniform, clustered, hard_equal_weights };
Dist parse_dist(const std::string& name);
std::string dist_name(Dist d);

struct GenOptions {
  std::int64_t n = 10;
  std::int64_t wmax = 10;
  std::int64_t pmax = 100;
  double t_frac = 0.5;
  std::uint64_t seed = 1;
  Dist dist = Dist::uniform;
};

// uniform: w in [1, wmax], p in [1, pmax].
// clustered: weights within wmax/20 of five centres, profit near w*pmax/wmax
//   (nearly equal efficiencies).
// hard-equal-weights: ceil(log2(wmax+1)) distinct weights, one of them wmax.
// t = floor(t_frac * sum of weights).
InstanceData generate(const GenOptions& opt);

struct BenchOptions {
  std::vector<std::int64_t> wmax_list{256, 512, 1024};
  std::int64_t n_per_w = 4;
  std::vector<std::string> solvers{"fast", "bellman"};
  int reps = 1;
  std::int64_t pmax = 1000;
  double t_frac = 0.5;
  std::uint64_t seed = 1;
  Dist dist = Dist::uniform;
  double C = 2.0;
};

struct BenchRow {
  std::int64_t instance_id = 0;
  std::int64_t n = 0;
  Weight w_max = 0;
  Weight t = 0;
  std::string solver;
  Wide profit = 0;
  std::int64_t wall_time_ns = 0;
  std::int64_t peak_table_cells = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  bool mismatch = false;
  std::string mismatch_message;
  // least-squares slope of log(median time) against log(w_max)
  std::map<std::string, double> slope;
  // median wall time per (solver, w_max), in seconds
  std::map<std::string, std::map<Weight, double>> median_seconds;
};

extern const char* const kBenchHeader;

// Throws SolverRefusal from a solver that declines an instance. Stops at
// the first instance whose solvers disagree.
BenchReport run_bench(const BenchOptions& opt, std::ostream* progress = nullptr);
std::string format_row(const BenchRow& r);
std::string format_slopes(const BenchReport& rep);

// Solves with a named solver: fast, bellman, proximity or exhaustive.
Wide solve_named(const std::string& solver, const std::vector<Item>& items, Weight t, double C,
                 std::int64_t* peak_cells = nullptr);

// Exit codes: 0 ok, 1 failed check (selftest, --verify), 2 bad input or
// usage, 3 solver refusal, 4 cross-solver mismatch in bench.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace knapsack::cli
