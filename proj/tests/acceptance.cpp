// Acceptance runner: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Usage: acceptance [criterion ...]   (default: all eight)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "knapsack/cli.hpp"
#include "knapsack/suites.hpp"

using namespace knapsack;

namespace {

struct Line {
  bool pass;
  std::string detail;
};

Line from(const suites::Outcome& o) {
  std::ostringstream os;
  os << o.name << ": " << o.cases - o.failures << "/" << o.cases;
  if (!o.note.empty()) os << " (" << o.note << ")";
  return {o.pass(), os.str()};
}

Line scaling() {
  cli::BenchOptions opt;
  opt.wmax_list = {256, 512, 1024, 2048, 4096};
  opt.n_per_w = 4;
  opt.solvers = {"fast", "bellman"};
  opt.seed = 1;
  std::cerr << cli::kBenchHeader << "\n";
  auto rep = cli::run_bench(opt, &std::cerr);
  if (rep.mismatch) return {false, "solver mismatch: " + rep.mismatch_message};
  const double slope = rep.slope.count("fast") ? rep.slope.at("fast") : 1e9;
  const double fast = rep.median_seconds["fast"][4096], bell = rep.median_seconds["bellman"][4096];
  const double ratio = fast > 0 ? bell / fast : 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "fast slope %.3f (limit 2.6), bellman/fast at 4096 = %.2fx (%.1fs / %.1fs, need 5x)",
                slope, ratio, bell, fast);
  return {slope <= 2.6 && ratio >= 5.0, buf};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  if (pick.empty()) pick = {1, 2, 3, 4, 5, 6, 7, 8};

  int failed = 0;
  for (int c : pick) {
    auto t0 = std::chrono::steady_clock::now();
    Line l{false, "unknown criterion"};
    switch (c) {
      case 1: l = from(suites::exhaustive_equivalence(1000, 101)); break;
      case 2: l = from(suites::bellman_equivalence(200, 202)); break;
      case 3: l = from(suites::smawk_oracle(500, 303)); break;
      case 4: l = from(suites::extend_contract(500, 404)); break;
      case 5: l = from(suites::composition(200, 505)); break;
      case 6: l = from(suites::coloring(200, 606)); break;
      case 7: l = from(suites::tie_breaking(200, 707)); break;
      case 8: l = scaling(); break;
      default: break;
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", l.pass ? "PASS" : "FAIL", c, l.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !l.pass;
  }
  return failed ? 1 : 0;
}
