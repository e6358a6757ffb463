#include "knapsack/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "knapsack/solver.hpp"
#include "knapsack/suites.hpp"

namespace knapsack::cli {

bool InstanceData::operator==(const InstanceData& o) const {
  if (t != o.t || items.size() != o.items.size()) return false;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].weight != o.items[i].weight || items[i].profit != o.items[i].profit) return false;
  return true;
}

namespace {

Wide parse_number(const std::string& tok, std::size_t line) {
  try {
    return parse_wide(tok);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not an integer: '" + tok + "'");
  }
}

std::int64_t to_int64(Wide v, std::size_t line) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw ParseError("line " + std::to_string(line) + ": value out of range");
  return static_cast<std::int64_t>(v);
}

}  // namespace

InstanceData parse_instance(std::istream& in) {
  InstanceData d;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::int64_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string s; ss >> s;) tok.push_back(s);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError("line " + std::to_string(lineno) + ": expected two integers");
    Wide a = parse_number(tok[0], lineno), b = parse_number(tok[1], lineno);
    if (!header) {
      n = to_int64(a, lineno);
      d.t = to_int64(b, lineno);
      if (n < 0 || d.t < 0) throw ParseError("line " + std::to_string(lineno) + ": n and t must be >= 0");
      header = true;
      continue;
    }
    if (static_cast<std::int64_t>(d.items.size()) == n)
      throw ParseError("line " + std::to_string(lineno) + ": more items than announced");
    Item it;
    it.weight = to_int64(a, lineno);
    it.profit = b;
    if (it.weight < 1 || it.profit < 1)
      throw ParseError("line " + std::to_string(lineno) + ": weights and profits must be >= 1");
    d.items.push_back(it);
  }
  if (!header) throw ParseError("missing header line 'n t'");
  if (static_cast<std::int64_t>(d.items.size()) != n)
    throw ParseError("expected " + std::to_string(n) + " items, found " + std::to_string(d.items.size()));
  return d;
}

InstanceData parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

std::string format_instance(const InstanceData& inst) {
  std::string s = std::to_string(inst.items.size()) + " " + std::to_string(inst.t) + "\n";
  for (const Item& it : inst.items) s += std::to_string(it.weight) + " " + to_string(it.profit) + "\n";
  return s;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t r) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * r) >> 64);
}

Dist parse_dist(const std::string& name) {
  if (name == "uniform") return Dist::uniform;
  if (name == "clustered") return Dist::clustered;
  if (name == "hard-equal-weights") return Dist::hard_equal_weights;
  throw std::invalid_argument("unknown distribution: " + name);
}

std::string dist_name(Dist d) {
  switch (d) {
    case Dist::uniform:
      return "uniform";
    case Dist::clustered:
      return "clustered";
    case Dist::hard_equal_weights:
      return "hard-equal-weights";
  }
  return "?";
}

InstanceData generate(const GenOptions& opt) {
  if (opt.n < 0 || opt.wmax < 1 || opt.pmax < 1 || !(opt.t_frac >= 0))
    throw std::invalid_argument("gen needs n >= 0, wmax >= 1, pmax >= 1, t-frac >= 0");
  SplitMix64 rng(opt.seed);
  const auto W = static_cast<std::uint64_t>(opt.wmax), P = static_cast<std::uint64_t>(opt.pmax);
  auto clamp = [](std::int64_t v, std::int64_t lo, std::int64_t hi) { return std::min(hi, std::max(lo, v)); };
  std::vector<std::int64_t> palette;
  if (opt.dist == Dist::clustered) {
    for (int c = 0; c < 5; ++c) palette.push_back(1 + static_cast<std::int64_t>(rng.below(W)));
  } else if (opt.dist == Dist::hard_equal_weights) {
    auto d = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(opt.wmax) + 1)));
    palette.push_back(opt.wmax);
    while (palette.size() < std::min<std::size_t>(d, W)) {
      auto w = 1 + static_cast<std::int64_t>(rng.below(W));
      if (std::find(palette.begin(), palette.end(), w) == palette.end()) palette.push_back(w);
    }
  }
  InstanceData d;
  d.items.resize(static_cast<std::size_t>(opt.n));
  Wide total = 0;
  for (Item& it : d.items) {
    switch (opt.dist) {
      case Dist::uniform:
        it.weight = 1 + static_cast<std::int64_t>(rng.below(W));
        it.profit = 1 + static_cast<Wide>(rng.below(P));
        break;
      case Dist::clustered: {
        const std::int64_t spread = std::max<std::int64_t>(1, opt.wmax / 20);
        const std::int64_t c = palette[rng.below(palette.size())];
        it.weight = clamp(c - spread + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * spread + 1))),
                          1, opt.wmax);
        const std::int64_t ps = std::max<std::int64_t>(1, opt.pmax / 20);
        const std::int64_t centre = (it.weight * opt.pmax + opt.wmax / 2) / opt.wmax;
        it.profit = clamp(centre - ps + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * ps + 1))), 1,
                          opt.pmax);
        break;
      }
      case Dist::hard_equal_weights:
        it.weight = palette[rng.below(palette.size())];
        it.profit = 1 + static_cast<Wide>(rng.below(P));
        break;
    }
    total += it.weight;
  }
  d.t = static_cast<Weight>(std::floor(opt.t_frac * static_cast<double>(total)));
  return d;
}

Wide solve_named(const std::string& solver, const std::vector<Item>& items, Weight t, double C,
                 std::int64_t* peak_cells) {
  SolverStats stats;
  Wide r;
  if (solver == "fast") {
    SolverConfig cfg;
    cfg.C = C;
    r = solve_fast(items, t, cfg, &stats);
  } else if (solver == "bellman") {
    r = solve_bellman(items, t, std::int64_t{1} << 42, &stats);
  } else if (solver == "proximity") {
    r = solve_proximity_smawk(items, t, &stats);
  } else if (solver == "exhaustive") {
    r = solve_exhaustive(items, t);
  } else {
    throw std::invalid_argument("unknown solver: " + solver);
  }
  if (peak_cells) *peak_cells = stats.peak_table_cells;
  return r;
}

const char* const kBenchHeader = "instance_id,n,w_max,t,solver,profit,wall_time_ns,peak_table_cells";

std::string format_row(const BenchRow& r) {
  return std::to_string(r.instance_id) + "," + std::to_string(r.n) + "," + std::to_string(r.w_max) + "," +
         std::to_string(r.t) + "," + r.solver + "," + to_string(r.profit) + "," + std::to_string(r.wall_time_ns) +
         "," + std::to_string(r.peak_table_cells);
}

BenchReport run_bench(const BenchOptions& opt, std::ostream* progress) {
  BenchReport rep;
  for (std::size_t id = 0; id < opt.wmax_list.size(); ++id) {
    GenOptions g;
    g.wmax = opt.wmax_list[id];
    g.n = opt.n_per_w * g.wmax;
    g.pmax = opt.pmax;
    g.t_frac = opt.t_frac;
    g.seed = opt.seed + id;
    g.dist = opt.dist;
    InstanceData inst = generate(g);
    Weight wm = 0;
    for (const Item& it : inst.items) wm = std::max(wm, it.weight);
    std::optional<Wide> agreed;
    std::string first_solver;
    for (const std::string& s : opt.solvers) {
      std::vector<double> secs;
      for (int r = 0; r < opt.reps; ++r) {
        BenchRow row;
        row.instance_id = static_cast<std::int64_t>(id);
        row.n = static_cast<std::int64_t>(inst.items.size());
        row.w_max = wm;
        row.t = inst.t;
        row.solver = s;
        auto t0 = std::chrono::steady_clock::now();
        row.profit = solve_named(s, inst.items, inst.t, opt.C, &row.peak_table_cells);
        auto t1 = std::chrono::steady_clock::now();
        row.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        secs.push_back(static_cast<double>(row.wall_time_ns) * 1e-9);
        if (progress) *progress << format_row(row) << std::endl;
        rep.rows.push_back(row);
        if (!agreed) {
          agreed = row.profit;
          first_solver = s;
        } else if (*agreed != row.profit) {
          rep.mismatch = true;
          rep.mismatch_message = "instance " + std::to_string(id) + ": " + first_solver + " = " + to_string(*agreed) +
                                 " but " + s + " = " + to_string(row.profit);
          return rep;
        }
      }
      std::sort(secs.begin(), secs.end());
      rep.median_seconds[s][opt.wmax_list[id]] = secs[secs.size() / 2];
    }
  }
  for (const auto& [s, byw] : rep.median_seconds) {
    if (byw.size() < 2) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(byw.size());
    for (auto [w, sec] : byw) {
      double x = std::log(static_cast<double>(w)), y = std::log(std::max(sec, 1e-9));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double den = k * sxx - sx * sx;
    if (den > 0) rep.slope[s] = (k * sxy - sx * sy) / den;
  }
  return rep;
}

std::string format_slopes(const BenchReport& rep) {
  std::ostringstream os;
  os << "# log-log slope of time vs w_max:";
  if (rep.slope.empty()) os << " n/a (need two w_max values)";
  for (const auto& [s, v] : rep.slope) os << " " << s << "=" << std::fixed << std::setprecision(3) << v;
  return os.str();
}

namespace {

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size() || v < 1) throw std::invalid_argument("bad list entry: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(tok);
  if (out.empty()) throw std::invalid_argument("empty solver list");
  return out;
}

int cmd_selftest(bool quick, double beta, std::uint64_t seed, std::ostream& out) {
  const int k = quick ? 1 : 5;
  std::vector<suites::Outcome> all;
  all.push_back(suites::exhaustive_equivalence(40 * k, seed));
  all.push_back(suites::bellman_equivalence(4 * k, seed, quick ? 300 : 800, quick ? 40 : 80));
  all.push_back(suites::smawk_oracle(40 * k, seed));
  all.push_back(suites::extend_contract(10 * k, seed, beta));
  all.push_back(suites::composition(10 * k, seed));
  all.push_back(suites::coloring(10 * k, seed, beta));
  all.push_back(suites::tie_breaking(20 * k, seed));
  int failed = 0;
  for (const auto& o : all) {
    out << (o.pass() ? "PASS " : "FAIL ") << o.name << ": " << o.cases - o.failures << "/" << o.cases;
    if (!o.note.empty()) out << " (" << o.note << ")";
    out << "\n";
    failed += !o.pass();
  }
  out << (failed ? "selftest FAILED: " + std::to_string(failed) + " suite(s)" : std::string("selftest passed")) << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact 0-1 knapsack solver"};
  app.require_subcommand(1);

  GenOptions gen;
  std::string dist = "uniform";
  auto* g = app.add_subcommand("gen", "Write a random instance to standard output");
  g->add_option("--n", gen.n, "number of items")->check(CLI::NonNegativeNumber);
  g->add_option("--wmax", gen.wmax, "largest weight")->check(CLI::PositiveNumber);
  g->add_option("--pmax", gen.pmax, "largest profit")->check(CLI::PositiveNumber);
  g->add_option("--t-frac", gen.t_frac, "capacity as a fraction of the total weight")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--dist", dist, "uniform | clustered | hard-equal-weights")
      ->check(CLI::IsMember({"uniform", "clustered", "hard-equal-weights"}));

  std::string path, solver = "fast";
  double C = 2.0;
  bool verify = false;
  auto* s = app.add_subcommand("solve", "Print the optimum of an instance file ('-' reads standard input)");
  s->add_option("path", path, "instance file")->required();
  s->add_option("--solver", solver, "fast | bellman | proximity | exhaustive")
      ->check(CLI::IsMember({"fast", "bellman", "proximity", "exhaustive"}));
  s->add_option("--constant,--structural-constant", C, "structural constant C of the fast solver")
      ->check(CLI::PositiveNumber);
  s->add_flag("--verify", verify, "cross-check against Bellman when n*t allows");

  BenchOptions bench;
  std::string wlist = "256,512,1024", slist = "fast,bellman", out_path = "-", bdist = "uniform";
  auto* b = app.add_subcommand("bench", "Time solvers on generated instances and emit CSV");
  b->add_option("--wmax-list", wlist, "comma-separated w_max values");
  b->add_option("--n-per-w", bench.n_per_w, "items per unit of w_max")->check(CLI::PositiveNumber);
  b->add_option("--solvers", slist, "comma-separated solver names");
  b->add_option("--reps", bench.reps, "repetitions per (instance, solver)")->check(CLI::PositiveNumber);
  b->add_option("--out", out_path, "CSV path, '-' for standard output");
  b->add_option("--pmax", bench.pmax, "largest profit")->check(CLI::PositiveNumber);
  b->add_option("--t-frac", bench.t_frac, "capacity as a fraction of the total weight");
  b->add_option("--seed", bench.seed, "base seed; instance i uses seed + i");
  b->add_option("--dist", bdist, "generator distribution")
      ->check(CLI::IsMember({"uniform", "clustered", "hard-equal-weights"}));
  b->add_option("--constant,--structural-constant", bench.C, "structural constant C")->check(CLI::PositiveNumber);

  bool quick = false;
  double beta = 12.0;
  std::uint64_t seed = 1;
  auto* st = app.add_subcommand("selftest", "Run the oracle-equivalence suites");
  st->add_flag("--quick", quick, "reduced instance counts");
  st->add_option("--beta", beta, "balls-and-bins constant");
  st->add_option("--seed", seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) {
      gen.dist = parse_dist(dist);
      out << format_instance(generate(gen));
      return 0;
    }
    if (*s) {
      InstanceData inst;
      try {
        if (path == "-") {
          inst = parse_instance(std::cin);
        } else {
          std::ifstream f(path);
          if (!f) throw ParseError("cannot open " + path);
          inst = parse_instance(f);
        }
      } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
      }
      Wide r = solve_named(solver, inst.items, inst.t, C);
      out << to_string(r) << "\n";
      if (verify) {
        const Wide cells = static_cast<Wide>(inst.items.size()) * (static_cast<Wide>(inst.t) + 1);
        if (cells > (Wide{1} << 34)) {
          err << "verify skipped: n*(t+1) too large for Bellman\n";
        } else {
          Wide ref = solve_bellman(inst.items, inst.t);
          if (ref != r) {
            err << "verify FAILED: " << solver << " " << to_string(r) << " vs Bellman " << to_string(ref) << "\n";
            return 1;
          }
          err << "verify ok\n";
        }
      }
      return 0;
    }
    if (*b) {
      bench.wmax_list = parse_int_list(wlist);
      bench.solvers = parse_name_list(slist);
      bench.dist = parse_dist(bdist);
      for (const auto& name : bench.solvers)
        if (name != "fast" && name != "bellman" && name != "proximity" && name != "exhaustive")
          throw std::invalid_argument("unknown solver: " + name);
      std::ofstream file;
      std::ostream* csv = &out;
      if (out_path != "-") {
        file.open(out_path);
        if (!file) {
          err << "cannot write " << out_path << "\n";
          return 2;
        }
        csv = &file;
      }
      *csv << kBenchHeader << "\n";
      BenchReport rep = run_bench(bench, csv);
      std::ostream& summary = out_path == "-" ? err : out;
      if (rep.mismatch) {
        err << "solver mismatch: " << rep.mismatch_message << "\n";
        return 4;
      }
      summary << format_slopes(rep) << "\n";
      return 0;
    }
    if (*st) return cmd_selftest(quick, beta, seed, out);
  } catch (const SolverRefusal& e) {
    err << "solver refused: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace knapsack::cli
