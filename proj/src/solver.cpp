#include "knapsack/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace knapsack {

namespace stage {

using extend::SetStore;

namespace {

std::vector<Weight> sorted_set(const SetStore& s, SetStore::Handle h) {
  std::vector<Weight> out(s.get(h).begin(), s.get(h).end());
  std::sort(out.begin(), out.end());
  return out;
}

// Handles resized to a new half size; new slots hold the empty set.
std::vector<SetStore::Handle> resize_handles(const std::vector<SetStore::Handle>& h, std::int64_t old_half,
                                             std::int64_t new_half) {
  std::vector<SetStore::Handle> out(static_cast<std::size_t>(2 * new_half + 1), SetStore::kEmpty);
  std::int64_t keep = std::min(old_half, new_half);
  for (std::int64_t z = -keep; z <= keep; ++z)
    out[static_cast<std::size_t>(z + new_half)] = h[static_cast<std::size_t>(z + old_half)];
  return out;
}

// [lo, hi] of finite entries; lo > hi when there are none.
std::pair<std::int64_t, std::int64_t> finite_span(const DpTable& q) {
  const std::int64_t L = q.half_size();
  std::int64_t lo = -L;
  while (lo <= L && q[lo].is_bottom()) ++lo;
  std::int64_t hi = L;
  while (hi >= lo && q[hi].is_bottom()) --hi;
  return {lo, hi};
}

}  // namespace

std::vector<Weight> HintedDpTable::positive_hint(std::int64_t z) const {
  return sorted_set(*pos_store, pos[static_cast<std::size_t>(z + half_size())]);
}

std::vector<Weight> HintedDpTable::negative_hint(std::int64_t z) const {
  return sorted_set(*neg_store, neg[static_cast<std::size_t>(z + half_size())]);
}

Plan make_plan(const Instance& tb, const GreedySplit& g, const std::vector<Weight>& W1, double C) {
  Plan p;
  p.inst = &tb;
  p.greedy = &g;
  p.W1 = W1;
  p.ranks = partition::rank_partition(tb, g, W1);
  p.schedule = partition::phase_schedule(tb.w_max, C, W1.size());
  return p;
}

HintedDpTable initial_table(const std::vector<Weight>& W1, std::int64_t L) {
  HintedDpTable t;
  t.q = DpTable(L);
  t.q[0] = Profit(0);
  t.pos_store = std::make_shared<SetStore>();
  t.neg_store = std::make_shared<SetStore>();
  t.pos.assign(static_cast<std::size_t>(2 * L + 1), SetStore::kEmpty);
  t.neg = t.pos;
  t.pos[static_cast<std::size_t>(L)] = t.pos_store->add(W1);
  t.neg[static_cast<std::size_t>(L)] = t.neg_store->add(W1);
  return t;
}

HintedDpTable propagate_phase(const Plan& plan, int j, smawk::Direction dir, const HintedDpTable& in,
                              const SolverConfig& cfg, SolverStats* stats) {
  const bool positive = dir == smawk::Direction::positive;
  const auto& ps = plan.schedule;
  const auto& items = plan.inst->items;
  const Weight w_max = plan.inst->w_max;
  const std::size_t lo = (std::size_t{1} << (j - 1)) - 1, hi = (std::size_t{1} << j) - 1;

  // Q_w over J_j ∩ I_w; items on each side are already in rank order.
  auto profits = std::make_shared<extend::ProfitTable>();
  std::vector<Weight> U;
  std::vector<std::int32_t> full(static_cast<std::size_t>(w_max) + 1, -1);
  std::vector<char> has_next(static_cast<std::size_t>(w_max) + 1, 0);
  Weight reach = 0;
  for (Weight w : plan.W1) {
    const WeightClass* c = plan.greedy->find_class(w);
    if (!c) continue;
    const auto& side = positive ? c->outside : c->inside;
    if (side.size() <= lo) continue;
    std::vector<Wide> inc;
    for (std::size_t r = lo; r < std::min(hi, side.size()); ++r)
      inc.push_back(positive ? items[side[r]].profit : -items[side[r]].profit);
    full[static_cast<std::size_t>(w)] = static_cast<std::int32_t>(inc.size());
    has_next[static_cast<std::size_t>(w)] = j < ps.k && side.size() > hi;
    reach += w * static_cast<Weight>(inc.size());
    profits->set(w, ConcaveProfitFn::from_increments(inc));
    U.push_back(w);
  }

  std::int64_t L = positive ? ps.L[static_cast<std::size_t>(j)] : in.half_size();
  if (cfg.clamp_to_reachable) {
    auto [flo, fhi] = finite_span(in.q);
    std::int64_t need = flo > fhi ? 0
                        : positive ? std::max(-flo, fhi + reach)
                                   : std::max(fhi, -flo + reach);
    L = std::min(ps.L[static_cast<std::size_t>(j)], std::max<std::int64_t>(need, 0));
  }
  const std::size_t N = static_cast<std::size_t>(2 * L + 1);

  // The engine only extends upward, so the negative side runs mirrored.
  extend::HintedExtendInstance K;
  K.universe = U;
  K.profits = profits;
  K.q = dp_resize(in.q, L);
  K.hints = resize_handles(positive ? in.pos : in.neg, in.half_size(), L);
  K.store = positive ? in.pos_store : in.neg_store;
  auto carried = resize_handles(positive ? in.neg : in.pos, in.half_size(), L);
  if (!positive) {
    std::reverse(K.q.raw().begin(), K.q.raw().end());
    std::reverse(K.hints.begin(), K.hints.end());
    std::reverse(carried.begin(), carried.end());
  }
  const std::int64_t b = ps.b[static_cast<std::size_t>(j)];
  for (std::size_t s = 0; s < N; ++s)
    if (K.q.raw()[s].is_finite() && K.store->set_size(K.hints[s]) > b)
      throw std::logic_error("hint exceeds the phase budget");

  extend::ExtendOptions opt;
  opt.beta = cfg.beta;
  opt.strategy = cfg.strategy;
  opt.stats = stats ? &stats->extend : nullptr;
  const std::int64_t b_next = ps.b[static_cast<std::size_t>(j + 1)];
  auto fresh = std::make_shared<SetStore>();
  std::vector<SetStore::Handle> fresh_h(N, SetStore::kEmpty), carry_h(N, SetStore::kEmpty);
  HintedDpTable out;
  out.q = DpTable(L);

  if (extend::prefers_per_weight(K, b, cfg.strategy)) {
    // The fresh hint is tracked along the chain, so entries that would
    // exceed b_{j+1} are never built.
    extend::HintTracker tr;
    tr.mark.assign(static_cast<std::size_t>(w_max) + 1, 0);
    for (Weight w : U)
      if (has_next[static_cast<std::size_t>(w)]) tr.mark[static_cast<std::size_t>(w)] = full[static_cast<std::size_t>(w)];
    tr.budget = b_next;
    tr.store = fresh;
    std::vector<SetStore::Handle> tracked;
    extend::HintedExtendSolution Y = extend::solve_per_weight_tracked(K, tr, tracked, opt.stats);
    out.q.raw() = std::move(Y.value);
    for (std::size_t s = 0; s < N; ++s) {
      if (out.q.raw()[s].is_bottom()) continue;
      fresh_h[s] = tracked[s];
      carry_h[s] = carried[static_cast<std::size_t>(Y.base[s] + L)];
    }
  } else {
    extend::HintedExtendSolution Y = extend::solve(K, b, opt);
    // Fresh hint of each support list, computed per pool node in id order
    // (tails come first): weights whose J_j class is used in full and that
    // still have items at level j+1.
    constexpr SetStore::Handle kOver = -1;
    Y.pool->compact(Y.support);
    const extend::SupportPool& pool = *Y.pool;
    std::vector<SetStore::Handle> memo(pool.size());
    for (std::size_t id = 0; id < pool.size(); ++id) {
      const auto& nd = pool[static_cast<std::int32_t>(id)];
      SetStore::Handle h = nd.next == extend::SupportPool::kNil ? SetStore::kEmpty : memo[static_cast<std::size_t>(nd.next)];
      auto w = static_cast<std::size_t>(nd.weight);
      if (h != kOver && nd.count == full[w] && has_next[w])
        h = fresh->set_size(h) + 1 > b_next ? kOver : fresh->cons(nd.weight, h);
      memo[id] = h;
    }
    out.q.raw() = std::move(Y.value);
    for (std::size_t s = 0; s < N; ++s) {
      if (out.q.raw()[s].is_bottom()) continue;
      SetStore::Handle h = Y.support[s] == extend::SupportPool::kNil ? SetStore::kEmpty
                                                                     : memo[static_cast<std::size_t>(Y.support[s])];
      if (h == kOver) {
        out.q.raw()[s] = Profit::bottom();
        continue;
      }
      fresh_h[s] = h;
      carry_h[s] = carried[static_cast<std::size_t>(Y.base[s] + L)];
    }
  }
  if (stats) stats->table(static_cast<std::int64_t>(N));

  if (!positive) {
    std::reverse(out.q.raw().begin(), out.q.raw().end());
    std::reverse(fresh_h.begin(), fresh_h.end());
    std::reverse(carry_h.begin(), carry_h.end());
  }
  if (positive) {
    out.pos = std::move(fresh_h);
    out.pos_store = fresh;
    out.neg = std::move(carry_h);
    out.neg_store = in.neg_store;
  } else {
    out.neg = std::move(fresh_h);
    out.neg_store = fresh;
    out.pos = std::move(carry_h);
    out.pos_store = in.pos_store;
  }
  return out;
}

DpTable first_stage(const Plan& plan, const SolverConfig& cfg, SolverStats* stats) {
  const auto& ps = plan.schedule;
  HintedDpTable cur = initial_table(plan.W1, cfg.clamp_to_reachable ? 0 : ps.L[0]);
  for (int j = 1; j <= ps.k; ++j) {
    cur = propagate_phase(plan, j, smawk::Direction::positive, cur, cfg, stats);
    cur = propagate_phase(plan, j, smawk::Direction::negative, cur, cfg, stats);
  }
  return std::move(cur.q);
}

void update_in_place(DpTable& q, Weight w, const ConcaveProfitFn& Q, bool positive) {
  const std::int64_t cap = Q.cap();
  if (cap == 0) return;
  std::vector<Wide> qv(static_cast<std::size_t>(cap) + 1);
  for (std::int64_t x = 0; x <= cap; ++x) qv[static_cast<std::size_t>(x)] = Q(x).value();
  auto& raw = q.raw();
  const auto n = static_cast<std::int64_t>(raw.size());
  constexpr Wide kBottom = Profit::bottom().value();
  // Sources sit on the side not yet visited, so they are still old values.
  auto relax = [&](std::int64_t s, std::int64_t step) {
    Wide best = raw[static_cast<std::size_t>(s)].value();
    std::int64_t src = s;
    for (std::int64_t x = 1; x <= cap; ++x) {
      src -= step;
      if (src < 0 || src >= n) break;
      Wide v = raw[static_cast<std::size_t>(src)].value();
      if (v != kBottom && v + qv[static_cast<std::size_t>(x)] > best) best = v + qv[static_cast<std::size_t>(x)];
    }
    raw[static_cast<std::size_t>(s)] = Profit(best);
  };
  if (positive) {
    for (std::int64_t s = n - 1; s >= 0; --s) relax(s, w);
  } else {
    for (std::int64_t s = 0; s < n; ++s) relax(s, -w);
  }
}

namespace {

void apply_class(DpTable& q, Weight w, const std::vector<std::size_t>& side, const std::vector<Item>& items,
                 bool positive) {
  if (side.empty()) return;
  std::vector<Wide> inc;
  inc.reserve(side.size());
  for (std::size_t idx : side) inc.push_back(positive ? items[idx].profit : -items[idx].profit);
  ConcaveProfitFn Q = ConcaveProfitFn::from_increments(inc);
  // direct scan costs cap per cell, SMAWK a few dozen
  if (Q.cap() <= 24) {
    update_in_place(q, w, Q, positive);
  } else {
    q = smawk::batch_update_weight_class(q, w, Q, Q.cap(), q.half_size(),
                                         positive ? smawk::Direction::positive : smawk::Direction::negative);
  }
}

Wide extract(const Instance& tb, const GreedySplit& g, const DpTable& q) {
  const std::int64_t room = tb.capacity - g.greedy_weight;
  Profit best = Profit::bottom();
  for (std::int64_t z = -q.half_size(); z <= std::min(q.half_size(), room); ++z) best = max(best, q[z]);
  if (best.is_bottom()) throw std::logic_error("no feasible exchange entry");
  return checked_add(g.greedy_profit, best.value());
}

}  // namespace

Wide second_stage(const Instance& tb, const GreedySplit& g, const partition::WeightPartition& wp,
                  const partition::PhaseSchedule& ps, const DpTable& stage_one, SolverStats* stats) {
  DpTable q = dp_resize(stage_one, ps.L_second[1]);
  if (stats) stats->table(q.cells());
  for (int j = 2; j <= wp.s; ++j) {
    for (Weight w : wp.part(j)) {
      const WeightClass* c = g.find_class(w);
      if (!c) continue;
      apply_class(q, w, c->outside, tb.items, true);
      apply_class(q, w, c->inside, tb.items, false);
    }
    q = dp_resize(q, ps.L_second[static_cast<std::size_t>(j)]);
  }
  return extract(tb, g, q);
}

}  // namespace stage

Wide solve_fast(std::span<const Item> items, Weight t, const SolverConfig& cfg, SolverStats* stats) {
  if (!(cfg.C > 0)) throw std::invalid_argument("structural constant must be positive");
  if (!(cfg.beta >= 1)) throw std::invalid_argument("beta must be at least 1");
  Instance inst = normalize(items, t);
  SolverStats local;
  SolverStats& st = stats ? *stats : local;
  if (inst.size() == 0) {
    st.route = "empty";
    return 0;
  }
  if (inst.all_fit) {
    st.route = "all_fit";
    return inst.total_profit;
  }
  const auto n = static_cast<Wide>(inst.size());
  Wide answer;
  if (cfg.force_fallback || static_cast<Wide>(inst.w_max) > n * n) {
    st.route = "bellman_fallback";
    answer = solve_bellman(items, t, cfg.bellman_budget, &st);
  } else {
    st.route = "fast";
    Instance tb = break_ties(inst);
    GreedySplit g = greedy_split(tb);
    auto wp = partition::weight_partition(tb, g, cfg.C);
    stage::Plan plan = stage::make_plan(tb, g, wp.part(1), cfg.C);
    st.w1_size = static_cast<std::int64_t>(plan.W1.size());
    st.k = plan.schedule.k;
    st.s = plan.schedule.s;
    DpTable q1 = stage::first_stage(plan, cfg, &st);
    Wide primed = stage::second_stage(tb, g, wp, plan.schedule, q1, &st);
    answer = recover_profit(Profit(primed), *tb.tie_break_M, tb.w_max).value();
  }
  if (cfg.verify == VerifyMode::cross_check_bellman &&
      static_cast<Wide>(inst.size()) * (static_cast<Wide>(t) + 1) <= cfg.bellman_budget) {
    Wide ref = solve_bellman(items, t, cfg.bellman_budget);
    if (ref != answer)
      throw std::logic_error("verification failed: fast " + to_string(answer) + " vs Bellman " + to_string(ref));
  }
  return answer;
}

}  // namespace knapsack
