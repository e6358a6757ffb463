#include "knapsack/hinted_extend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include "knapsack/coloring.hpp"

namespace knapsack::extend {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) { return (a - floor_mod(a, m)) / m; }

const ConcaveProfitFn kNoItems;

void check_same_shape(const HintedExtendSolution& a, const HintedExtendSolution& b) {
  if (a.half != b.half) throw std::invalid_argument("solutions have different table sizes");
}

}  // namespace

SetStore::Handle SetStore::add(std::span<const Weight> elems) {
  Handle h = kEmpty;
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) h = cons(*it, h);
  return h;
}

SetStore::Handle SetStore::cons(Weight w, Handle tail) {
  if (nodes_.size() >= static_cast<std::size_t>(std::numeric_limits<Handle>::max()))
    throw std::length_error("set store is full");
  nodes_.push_back({w, tail, set_size(tail) + 1});
  return static_cast<Handle>(nodes_.size() - 1);
}

void SetStore::compact(std::vector<Handle>& roots) {
  // Same scheme as SupportPool::compact; node 0 stays the empty set.
  std::vector<Handle> remap(nodes_.size(), 0);
  remap[0] = 1;
  for (Handle h : roots) remap[static_cast<std::size_t>(h)] = 1;
  for (std::size_t id = nodes_.size(); id-- > 1;)
    if (remap[id]) remap[static_cast<std::size_t>(nodes_[id].next)] = 1;
  Handle kept = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!remap[id]) continue;
    Node n = nodes_[id];
    if (id > 0) n.next = remap[static_cast<std::size_t>(n.next)];
    remap[id] = kept;
    nodes_[static_cast<std::size_t>(kept++)] = n;
  }
  nodes_.resize(static_cast<std::size_t>(kept));
  for (auto& h : roots) h = remap[static_cast<std::size_t>(h)];
}

bool SetStore::contains(Handle h, Weight w) const {
  for (Weight e : get(h))
    if (e == w) return true;
  return false;
}

void ProfitTable::set(Weight w, ConcaveProfitFn fn) {
  auto it = std::lower_bound(weights_.begin(), weights_.end(), w);
  auto pos = it - weights_.begin();
  if (it != weights_.end() && *it == w) {
    fns_[static_cast<std::size_t>(pos)] = std::move(fn);
    return;
  }
  weights_.insert(it, w);
  fns_.insert(fns_.begin() + pos, std::move(fn));
}

const ConcaveProfitFn* ProfitTable::find(Weight w) const {
  auto it = std::lower_bound(weights_.begin(), weights_.end(), w);
  if (it == weights_.end() || *it != w) return nullptr;
  return &fns_[static_cast<std::size_t>(it - weights_.begin())];
}

void SupportPool::compact(std::vector<std::int32_t>& heads) {
  // next < id for every node, so one descending pass marks everything
  // reachable and one ascending pass copies it.
  std::vector<std::int32_t> remap(nodes_.size(), 0);
  for (std::int32_t h : heads)
    if (h != kNil) remap[static_cast<std::size_t>(h)] = 1;
  for (std::size_t id = nodes_.size(); id-- > 0;)
    if (remap[id] && nodes_[id].next != kNil) remap[static_cast<std::size_t>(nodes_[id].next)] = 1;
  std::int32_t kept = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!remap[id]) continue;
    Node n = nodes_[id];
    if (n.next != kNil) n.next = remap[static_cast<std::size_t>(n.next)];
    remap[id] = kept;
    nodes_[static_cast<std::size_t>(kept++)] = n;
  }
  nodes_.resize(static_cast<std::size_t>(kept));
  for (auto& h : heads)
    if (h != kNil) h = remap[static_cast<std::size_t>(h)];
}

std::int32_t SupportPool::import(const SupportPool& from, std::int32_t head, std::int32_t tail) {
  std::vector<Node> chain;
  for (std::int32_t cur = head; cur != kNil; cur = from[cur].next) chain.push_back(from[cur]);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) tail = push(it->weight, it->count, tail);
  return tail;
}

HintedExtendInstance HintedExtendInstance::make(std::vector<Weight> universe,
                                                std::shared_ptr<const ProfitTable> profits, DpTable q,
                                                const std::vector<std::vector<Weight>>& sets) {
  if (sets.size() != static_cast<std::size_t>(q.cells())) throw std::invalid_argument("one hint set per index");
  std::sort(universe.begin(), universe.end());
  auto store = std::make_shared<SetStore>();
  HintedExtendInstance K;
  K.hints.reserve(sets.size());
  for (auto s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    K.hints.push_back(store->add(s));
  }
  K.universe = std::move(universe);
  K.profits = std::move(profits);
  K.q = std::move(q);
  K.store = std::move(store);
  return K;
}

bool HintedExtendInstance::in_universe(Weight w) const {
  return std::binary_search(universe.begin(), universe.end(), w);
}

std::vector<Weight> HintedExtendInstance::hint(std::int64_t i) const {
  std::vector<Weight> out;
  for (Weight w : store->get(handle(i)))
    if (in_universe(w)) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t HintedExtendInstance::hint_size(std::int64_t i) const {
  std::size_t n = 0;
  for (Weight w : store->get(handle(i))) n += in_universe(w);
  return n;
}

const ConcaveProfitFn& HintedExtendInstance::fn(Weight w) const {
  const ConcaveProfitFn* f = profits ? profits->find(w) : nullptr;
  return f ? *f : kNoItems;
}

HintedExtendSolution HintedExtendSolution::trivial(const DpTable& q) {
  HintedExtendSolution Y;
  Y.half = q.half_size();
  Y.base.resize(static_cast<std::size_t>(q.cells()));
  for (std::int64_t i = -Y.half; i <= Y.half; ++i) Y.base[static_cast<std::size_t>(i + Y.half)] = i;
  Y.value = q.raw();
  Y.support.assign(static_cast<std::size_t>(q.cells()), SupportPool::kNil);
  Y.pool = std::make_shared<SupportPool>();
  return Y;
}

std::vector<std::pair<Weight, std::int64_t>> HintedExtendSolution::x(std::int64_t i) const {
  std::vector<std::pair<Weight, std::int64_t>> out;
  for (std::int32_t cur = head(i); cur != SupportPool::kNil; cur = (*pool)[cur].next)
    out.emplace_back((*pool)[cur].weight, (*pool)[cur].count);
  std::sort(out.begin(), out.end());
  std::size_t k = 0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (k > 0 && out[k - 1].first == out[t].first) out[k - 1].second += out[t].second;
    else out[k++] = out[t];
  }
  out.resize(k);
  return out;
}

HintedExtendSolution solve_singleton(const HintedExtendInstance& K, ExtendStats* stats) {
  const std::int64_t L = K.half_size();
  HintedExtendSolution Y = HintedExtendSolution::trivial(K.q);

  struct Key {
    Weight w;
    std::int64_t c;
    std::int64_t j;
  };
  std::vector<Key> keys;
  for (std::int64_t j = -L; j <= L; ++j) {
    if (K.q[j].is_bottom()) continue;
    Weight w = 0;
    std::size_t count = 0;
    for (Weight e : K.store->get(K.handle(j)))
      if (K.in_universe(e)) w = e, ++count;
    if (count > 1) throw std::invalid_argument("solve_singleton needs hint sets of size at most one");
    if (count == 1) keys.push_back({w, floor_mod(j, w), j});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.c != b.c) return a.c < b.c;
    return a.j < b.j;
  });

  // Stage 1: per (w, c), SMAWK over the bases J yields one AP per base.
  struct Ap {
    std::int64_t j, c, w, k, l;
  };
  std::vector<Ap> aps;
  std::vector<const ConcaveProfitFn*> ap_fn;
  std::vector<std::int64_t> pos, base_idx;
  std::vector<Profit> val;
  std::int64_t evals = 0;
  for (std::size_t s = 0; s < keys.size();) {
    std::size_t e = s;
    while (e < keys.size() && keys[e].w == keys[s].w && keys[e].c == keys[s].c) ++e;
    const Weight w = keys[s].w;
    const std::int64_t c = keys[s].c;
    const ConcaveProfitFn& Q = K.fn(w);
    if (Q.cap() > 0) {
      pos.clear();
      val.clear();
      base_idx.clear();
      for (std::size_t t = s; t < e; ++t) {
        pos.push_back((keys[t].j - c) / w);
        val.push_back(K.q[keys[t].j]);
        base_idx.push_back(keys[t].j);
      }
      evals += smawk::residue_maxima(pos, val, pos[0], floor_div(L - c, w), Q, Q.cap(),
                                     [&](std::int64_t col, std::int64_t r1, std::int64_t r2) {
                                       // drop rows at or before the base itself
                                       std::int64_t k = std::max(r1, pos[static_cast<std::size_t>(col)] + 1);
                                       if (k <= r2) {
                                         aps.push_back({base_idx[static_cast<std::size_t>(col)], c, w, k, r2});
                                         ap_fn.push_back(&Q);
                                       }
                                     });
    }
    s = e;
  }

  // Stage 2: left-to-right bucket scan; only each bucket's winner advances.
  struct BucketNode {
    std::int32_t ap;
    std::int32_t next;
  };
  std::vector<std::int32_t> bucket(static_cast<std::size_t>(2 * L + 1), -1);
  std::vector<BucketNode> nodes;
  nodes.reserve(aps.size() + static_cast<std::size_t>(2 * L + 1));
  auto insert = [&](std::size_t ap, std::int64_t i) {
    auto& h = bucket[static_cast<std::size_t>(i + L)];
    nodes.push_back({static_cast<std::int32_t>(ap), h});
    h = static_cast<std::int32_t>(nodes.size() - 1);
  };
  for (std::size_t a = 0; a < aps.size(); ++a) insert(a, aps[a].c + aps[a].k * aps[a].w);
  for (std::int64_t i = -L; i <= L; ++i) {
    std::int32_t h = bucket[static_cast<std::size_t>(i + L)];
    if (h < 0) continue;
    std::int32_t best = -1;
    Profit best_val = Profit::bottom();
    for (std::int32_t n = h; n >= 0; n = nodes[static_cast<std::size_t>(n)].next) {
      std::int32_t a = nodes[static_cast<std::size_t>(n)].ap;
      const Ap& ap = aps[static_cast<std::size_t>(a)];
      Profit v = K.q[ap.j] + (*ap_fn[static_cast<std::size_t>(a)])((i - ap.j) / ap.w);
      if (best < 0 || v > best_val) best = a, best_val = v;
    }
    const Ap& win = aps[static_cast<std::size_t>(best)];
    auto slot = static_cast<std::size_t>(i + L);
    if (best_val > Y.value[slot]) {
      Y.value[slot] = best_val;
      Y.base[slot] = win.j;
      Y.support[slot] = Y.pool->push(win.w, (i - win.j) / win.w, SupportPool::kNil);
    }
    if (i + win.w <= win.c + win.l * win.w) insert(static_cast<std::size_t>(best), i + win.w);
  }

  if (stats) {
    stats->aps += static_cast<std::int64_t>(aps.size());
    stats->bucket_inserts += static_cast<std::int64_t>(nodes.size());
    stats->singleton_calls += 1;
    stats->smawk_evals += evals;
  }
  return Y;
}

HintedExtendInstance restrict(const HintedExtendInstance& K, std::span<const Weight> V) {
  HintedExtendInstance out = K;
  std::vector<Weight> v(V.begin(), V.end());
  std::sort(v.begin(), v.end());
  out.universe.clear();
  std::set_intersection(K.universe.begin(), K.universe.end(), v.begin(), v.end(), std::back_inserter(out.universe));
  return out;
}

HintedExtendInstance apply_update(const HintedExtendInstance& K, std::span<const Weight> V,
                                  const HintedExtendSolution& Y) {
  if (Y.half != K.half_size()) throw std::invalid_argument("solution and instance sizes differ");
  std::vector<Weight> v(V.begin(), V.end());
  std::sort(v.begin(), v.end());
  HintedExtendInstance out;
  std::set_difference(K.universe.begin(), K.universe.end(), v.begin(), v.end(), std::back_inserter(out.universe));
  out.profits = K.profits;
  out.store = K.store;
  out.q = DpTable(K.half_size());
  out.q.raw() = Y.value;
  out.hints.resize(K.hints.size());
  for (std::int64_t i = -Y.half; i <= Y.half; ++i) {
    auto slot = static_cast<std::size_t>(i + Y.half);
    out.hints[slot] = Y.value[slot].is_finite() ? K.handle(Y.base[slot]) : SetStore::kEmpty;
  }
  return out;
}

HintedExtendSolution compose(const HintedExtendSolution& Y2, const HintedExtendSolution& Y1) {
  check_same_shape(Y1, Y2);
  HintedExtendSolution out;
  out.half = Y1.half;
  out.pool = Y1.pool;
  const std::size_t N = Y1.base.size();
  out.base.resize(N);
  out.value = Y2.value;
  out.support.resize(N);
  for (std::size_t s = 0; s < N; ++s) {
    std::int64_t mid = Y2.base[s];
    auto m = static_cast<std::size_t>(mid + Y1.half);
    out.base[s] = Y1.base[m];
    std::int32_t tail = Y1.support[m];
    out.support[s] = Y2.support[s] == SupportPool::kNil ? tail : out.pool->import(*Y2.pool, Y2.support[s], tail);
  }
  return out;
}

HintedExtendInstance entrywise_max_instances(const HintedExtendInstance& K1, const HintedExtendInstance& K2) {
  if (K1.half_size() != K2.half_size() || K1.universe != K2.universe)
    throw std::invalid_argument("entry-wise maximum needs equal universes and sizes");
  const std::int64_t L = K1.half_size();
  auto store = std::make_shared<SetStore>();
  HintedExtendInstance out;
  out.universe = K1.universe;
  out.profits = K1.profits;
  out.q = DpTable(L);
  out.hints.resize(K1.hints.size());
  for (std::int64_t i = -L; i <= L; ++i) {
    Profit a = K1.q[i], b = K2.q[i];
    std::vector<Weight> s;
    if (a > b) {
      s = K1.hint(i);
    } else if (a < b) {
      s = K2.hint(i);
    } else {
      auto x = K1.hint(i), y = K2.hint(i);
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(s));
    }
    out.q[i] = max(a, b);
    out.hints[static_cast<std::size_t>(i + L)] = store->add(s);
  }
  out.store = std::move(store);
  return out;
}

HintedExtendSolution entrywise_max_solutions(const HintedExtendSolution& Y1, const HintedExtendSolution& Y2) {
  check_same_shape(Y1, Y2);
  HintedExtendSolution out = Y1;
  const bool same_pool = Y1.pool == Y2.pool;
  for (std::size_t s = 0; s < Y1.base.size(); ++s) {
    if (Y1.value[s] > Y2.value[s]) continue;
    out.base[s] = Y2.base[s];
    out.value[s] = Y2.value[s];
    out.support[s] = same_pool ? Y2.support[s] : out.pool->import(*Y2.pool, Y2.support[s]);
  }
  return out;
}

namespace {

// Hint sets of finite entries as index sets into K.universe, one per table
// index (bottom entries get the empty set).
SetSystem hint_system(const HintedExtendInstance& K, std::int64_t b) {
  const std::int64_t L = K.half_size();
  SetSystem sets(static_cast<std::size_t>(2 * L + 1));
  for (std::int64_t i = -L; i <= L; ++i) {
    if (K.q[i].is_bottom()) continue;
    auto& s = sets[static_cast<std::size_t>(i + L)];
    for (Weight w : K.store->get(K.handle(i))) {
      auto it = std::lower_bound(K.universe.begin(), K.universe.end(), w);
      if (it != K.universe.end() && *it == w) s.push_back(it - K.universe.begin());
    }
    if (static_cast<std::int64_t>(s.size()) > b) throw std::invalid_argument("hint set exceeds the budget b");
  }
  return sets;
}

// Runs singleton solves over the given color classes of K.universe,
// chaining each through apply_update and compose.
template <class Solve>
HintedExtendSolution chain_classes(const HintedExtendInstance& K, const std::vector<std::int64_t>& color,
                                   std::int64_t colors, Solve&& solve_class) {
  std::vector<std::vector<Weight>> classes(static_cast<std::size_t>(colors));
  for (std::size_t t = 0; t < K.universe.size(); ++t)
    classes[static_cast<std::size_t>(color[t])].push_back(K.universe[t]);
  HintedExtendInstance cur = K;
  HintedExtendSolution Y = HintedExtendSolution::trivial(K.q);
  for (const auto& Uc : classes) {
    if (Uc.empty()) continue;
    HintedExtendSolution Yc = solve_class(restrict(cur, Uc));
    cur = apply_update(cur, Uc, Yc);
    Y = compose(Yc, Y);
  }
  return Y;
}

}  // namespace

HintedExtendSolution solve_small_b(const HintedExtendInstance& K, std::int64_t b, const ExtendOptions& opt) {
  const std::int64_t L = K.half_size();
  b = std::max<std::int64_t>(b, 1);
  SetSystem sets = hint_system(K, b);
  auto hs = det_isolating_colorings(sets, static_cast<std::int64_t>(K.universe.size()), b);

  // I^(j): indices whose hint set is first isolated by h_j.
  std::vector<std::size_t> owner(sets.size(), 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < hs.size(); ++j) {
      std::vector<std::int64_t> seen;
      bool distinct = true;
      for (std::int64_t e : sets[i]) {
        std::int64_t col = hs[j][static_cast<std::size_t>(e)];
        if (std::find(seen.begin(), seen.end(), col) != seen.end()) {
          distinct = false;
          break;
        }
        seen.push_back(col);
      }
      if (distinct) {
        owner[i] = j;
        break;
      }
    }
  }

  HintedExtendSolution result = HintedExtendSolution::trivial(K.q);
  bool have = false;
  for (std::size_t j = 0; j < hs.size(); ++j) {
    HintedExtendInstance Kj = K;
    bool any = false;
    for (std::int64_t i = -L; i <= L; ++i) {
      auto slot = static_cast<std::size_t>(i + L);
      if (owner[slot] != j) {
        Kj.q[i] = Profit::bottom();
        Kj.hints[slot] = SetStore::kEmpty;
      } else {
        any = any || K.q[i].is_finite();
      }
    }
    if (!any) continue;
    HintedExtendSolution Yj = chain_classes(Kj, hs[j], b * b, [&](const HintedExtendInstance& Kc) {
      return solve_singleton(Kc, opt.stats);
    });
    result = have ? entrywise_max_solutions(result, Yj) : Yj;
    have = true;
  }
  return result;
}

HintedExtendSolution solve(const HintedExtendInstance& K, std::int64_t b, const ExtendOptions& opt) {
  const std::int64_t L = K.half_size();
  b = std::max<std::int64_t>(b, 1);
  const double lg = std::log2(4.0 * static_cast<double>(L) + 2.0);
  const bool large = opt.force_large_b ? b > 1 : static_cast<double>(b) > 2.0 * lg;
  if (!large) return solve_small_b(K, b, opt);

  std::int64_t r = static_cast<std::int64_t>(std::floor(static_cast<double>(b) / lg));
  if (opt.force_large_b) r = std::max<std::int64_t>(r, 2);
  SetSystem sets = hint_system(K, b);
  auto color = det_balls_and_bins(sets, static_cast<std::int64_t>(K.universe.size()), r, opt.beta);
  std::int64_t colors = 1;
  while (colors * 2 <= r) colors *= 2;
  const auto b1 = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(opt.beta * std::log2(2.0 * static_cast<double>(sets.size())))));
  return chain_classes(K, color, colors, [&](const HintedExtendInstance& Kc) { return solve_small_b(Kc, b1, opt); });
}

namespace {

constexpr std::int64_t kDirectCap = 16;

// The per-weight chain over values of type V (int64 when everything fits,
// Wide otherwise). none marks bottom.
template <class V>
struct Chain {
  const HintedExtendInstance& K;
  std::vector<V>& v;
  V none;
  HintedExtendSolution& Y;
  std::vector<SetStore::Handle>& handle;
  const HintTracker* tr = nullptr;
  std::vector<SetStore::Handle>* tracked = nullptr;
  std::int64_t evals = 0;

  static V add(V a, V b) {
    if constexpr (std::is_same_v<V, Wide>) {
      V r;
      if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("profit overflow");
      return r;
    } else {
      return a + b;  // range checked up front
    }
  }

  void run() {
    const std::int64_t L = K.half_size();
    const std::size_t N = static_cast<std::size_t>(2 * L + 1);
    SupportPool& pool = *Y.pool;
    auto& base = Y.base;
    auto& head = Y.support;

    // Membership of the current weight is marked per handle through an
    // inverted index built once.
    std::vector<SetStore::Handle> used;
    std::size_t flo = N, fhi = 0;
    for (std::size_t s = 0; s < N; ++s)
      if (v[s] != none) used.push_back(handle[s]), flo = std::min(flo, s), fhi = s;
    if (flo == N) return;
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::vector<std::vector<SetStore::Handle>> holders(K.universe.size());
    for (SetStore::Handle h : used)
      for (Weight w : K.store->get(h)) {
        auto it = std::lower_bound(K.universe.begin(), K.universe.end(), w);
        if (it != K.universe.end() && *it == w) holders[static_cast<std::size_t>(it - K.universe.begin())].push_back(h);
      }
    std::vector<char> marked(K.store->size(), 0);

    struct Update {
      std::int64_t row;
      std::int64_t col;
      std::int64_t x;
    };
    std::vector<std::int64_t> pos, idx;
    std::vector<Profit> cval;
    std::vector<Update> updates;
    std::size_t compact_at = std::max<std::size_t>(4 * N, 1 << 20);
    if (!tr) pool.reserve(compact_at + N);

    std::vector<std::int32_t> tsize;
    if (tr) {
      tracked->assign(N, SetStore::kEmpty);
      tsize.assign(N, 0);
      tr->store->reserve(tr->store->size() + compact_at + N);
    }
    std::int64_t markw = 0;
    // Would taking x copies of the current weight on top of src overflow
    // the tracked set?
    auto blocked = [&](std::size_t src, std::int64_t x) {
      return tr && x == markw && tsize[src] >= tr->budget;
    };
    auto improve = [&](std::size_t si, std::size_t src, V value, Weight w, std::int64_t x) {
      v[si] = value;
      base[si] = base[src];
      handle[si] = handle[src];
      if (tr) {
        auto& tk = *tracked;
        tk[si] = x == markw ? tr->store->cons(w, tk[src]) : tk[src];
        tsize[si] = tsize[src] + (x == markw);
      } else {
        head[si] = pool.push(w, x, head[src]);
      }
      fhi = std::max(fhi, si);
    };

    for (std::size_t t = 0; t < K.universe.size(); ++t) {
      const Weight w = K.universe[t];
      const ConcaveProfitFn& Q = K.fn(w);
      const std::int64_t cap = Q.cap();
      if (cap == 0 || holders[t].empty()) continue;
      for (SetStore::Handle h : holders[t]) marked[static_cast<std::size_t>(h)] = 1;
      const bool everyone = holders[t].size() == used.size();
      markw = tr && static_cast<std::size_t>(w) < tr->mark.size() ? tr->mark[static_cast<std::size_t>(w)] : 0;
      const auto sw = static_cast<std::size_t>(w);

      if (cap <= kDirectCap) {
        // One descending sweep: sources lie below their targets, so they are
        // still in their pre-step state when read.
        const std::size_t top = std::min(N - 1, fhi + static_cast<std::size_t>(cap) * sw);
        V q[kDirectCap + 1];
        for (std::int64_t x = 0; x <= cap; ++x) q[x] = static_cast<V>(Q(x).value());
        if (cap == 1 && everyone) {
          const V q1 = q[1];
          for (std::size_t si = top; si >= flo + sw; --si) {
            const V src = v[si - sw];
            if (src != none && !blocked(si - sw, 1)) {
              const V cand = add(src, q1);
              if (cand > v[si]) improve(si, si - sw, cand, w, 1);
            }
          }
        } else {
          for (std::size_t si = top; si >= flo + sw; --si) {
            V best = v[si];
            std::size_t bsrc = 0, src = si - sw;
            std::int64_t bx = 0;
            for (std::int64_t x = 1; x <= cap; ++x, src -= sw) {
              if (v[src] != none && (everyone || marked[static_cast<std::size_t>(handle[src])]) && !blocked(src, x)) {
                const V cand = add(v[src], q[x]);
                if (cand > best) best = cand, bsrc = src, bx = x;
              }
              if (src < flo + sw) break;
            }
            if (bx) improve(si, bsrc, best, w, bx);
          }
        }
        evals += cap * static_cast<std::int64_t>(top + 1 - std::min(top + 1, flo + sw));
      } else {
        for (std::int64_t c = 0; c < w; ++c) {
          const std::int64_t first = -L + floor_mod(c + L, w);  // smallest index >= -L in class c
          if (first > L) break;
          pos.clear();
          idx.clear();
          cval.clear();
          for (std::int64_t i = first, k = 0; i <= L; i += w, ++k) {
            auto s = static_cast<std::size_t>(i + L);
            if (v[s] != none && marked[static_cast<std::size_t>(handle[s])]) {
              pos.push_back(k);
              idx.push_back(i);
              cval.push_back(Profit(v[s]));
            }
          }
          if (pos.empty()) continue;
          const std::int64_t last_row = (L - first) / w;
          updates.clear();
          evals += smawk::residue_maxima(pos, cval, pos[0], last_row, Q, cap,
                                         [&](std::int64_t col, std::int64_t r1, std::int64_t r2) {
                                           std::int64_t p = pos[static_cast<std::size_t>(col)];
                                           for (std::int64_t r = std::max(r1, p + 1); r <= r2; ++r)
                                             updates.push_back({r, col, r - p});
                                         });
          // Bases always precede their rows, so applying from the top keeps
          // every base at its pre-step state.
          for (auto it = updates.rbegin(); it != updates.rend(); ++it) {
            auto si = static_cast<std::size_t>(first + it->row * w + L);
            auto sj = static_cast<std::size_t>(idx[static_cast<std::size_t>(it->col)] + L);
            const V cand = add(static_cast<V>(cval[static_cast<std::size_t>(it->col)].value()),
                               static_cast<V>(Q(it->x).value()));
            if (cand > v[si] && !blocked(sj, it->x)) improve(si, sj, cand, w, it->x);
          }
        }
      }
      for (SetStore::Handle h : holders[t]) marked[static_cast<std::size_t>(h)] = 0;
      if (tr && tr->store->size() >= compact_at) {
        tr->store->compact(*tracked);
        compact_at = std::max(compact_at, 4 * tr->store->size() + 2 * N);
        tr->store->reserve(compact_at + N);
      } else if (!tr && pool.size() >= compact_at) {
        pool.compact(head);
        compact_at = std::max(compact_at, 4 * pool.size() + 2 * N);
        pool.reserve(compact_at + N);
      }
    }
  }
};

Wide abs_wide(Wide a) { return a < 0 ? -a : a; }

}  // namespace

namespace {

HintedExtendSolution per_weight(const HintedExtendInstance& K, const HintTracker* tr,
                                std::vector<SetStore::Handle>* tracked, ExtendStats* stats) {
  HintedExtendSolution Y = HintedExtendSolution::trivial(K.q);
  std::vector<SetStore::Handle> handle(K.hints);
  // Every value is a table entry plus at most one Q_w(x) per weight.
  Wide bound = 0;
  for (const Profit& p : Y.value)
    if (p.is_finite()) bound = std::max(bound, abs_wide(p.value()));
  for (Weight w : K.universe) {
    Wide m = 0;
    for (const Profit& p : K.fn(w).prefix()) m = std::max(m, abs_wide(p.value()));
    bound = bound > (Wide{1} << 100) ? bound : bound + m;
  }
  std::int64_t evals = 0;
  if (bound < (Wide{1} << 62)) {
    constexpr auto kNone = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> v(Y.value.size());
    for (std::size_t s = 0; s < v.size(); ++s)
      v[s] = Y.value[s].is_finite() ? static_cast<std::int64_t>(Y.value[s].value()) : kNone;
    Chain<std::int64_t> ch{K, v, kNone, Y, handle, tr, tracked};
    ch.run();
    evals = ch.evals;
    for (std::size_t s = 0; s < v.size(); ++s) Y.value[s] = v[s] == kNone ? Profit::bottom() : Profit(v[s]);
  } else {
    std::vector<Wide> v(Y.value.size());
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = Y.value[s].value();
    Chain<Wide> ch{K, v, Profit::bottom().value(), Y, handle, tr, tracked};
    ch.run();
    evals = ch.evals;
    for (std::size_t s = 0; s < v.size(); ++s) Y.value[s] = Profit(v[s]);
  }
  if (stats) {
    stats->smawk_evals += evals;
    stats->singleton_calls += static_cast<std::int64_t>(K.universe.size());
  }
  return Y;
}

}  // namespace

HintedExtendSolution solve_per_weight(const HintedExtendInstance& K, ExtendStats* stats) {
  return per_weight(K, nullptr, nullptr, stats);
}

HintedExtendSolution solve_per_weight_tracked(const HintedExtendInstance& K, const HintTracker& tr,
                                              std::vector<SetStore::Handle>& tracked, ExtendStats* stats) {
  if (!tr.store) throw std::invalid_argument("tracker needs a store");
  HintedExtendSolution Y = per_weight(K, &tr, &tracked, stats);
  if (tracked.empty()) tracked.assign(Y.value.size(), SetStore::kEmpty);
  return Y;
}

bool prefers_per_weight(const HintedExtendInstance& K, std::int64_t b, Strategy strategy) {
  if (strategy != Strategy::automatic) return strategy == Strategy::per_weight;
  // Both routes sweep the whole table once per singleton step; compare the
  // number of steps.
  double lg = std::log2(4.0 * static_cast<double>(K.half_size()) + 2.0);
  double active = 0;
  for (Weight w : K.universe) active += K.fn(w).cap() > 0;
  double bb = static_cast<double>(std::max<std::int64_t>(b, 1));
  double cc = static_cast<double>(b) <= 2 * lg ? std::ceil(lg) * std::min(bb * bb, active)
                                              : std::ceil(lg) * active;
  return active <= cc;
}

HintedExtendSolution solve_dispatch(const HintedExtendInstance& K, std::int64_t b, const ExtendOptions& opt) {
  if (prefers_per_weight(K, b, opt.strategy)) return solve_per_weight(K, opt.stats);
  return solve(K, b, opt);
}

Verdict relaxed_checker(const HintedExtendInstance& K, const HintedExtendSolution& Y, std::int64_t max_vectors) {
  Verdict v;
  const std::int64_t L = K.half_size();
  auto fail = [&](std::int64_t i, const std::string& why) {
    if (v.failing.empty() || v.failing.back() != i) v.failing.push_back(i);
    if (v.ok) v.message = "index " + std::to_string(i) + ": " + why;
    v.ok = false;
  };
  if (Y.half != L) {
    v.ok = false;
    v.message = "solution size differs from the instance";
    return v;
  }

  for (std::int64_t i = -L; i <= L; ++i) {
    std::int64_t z = Y.z(i);
    if (z < -L || z > L) {
      fail(i, "base index out of range");
      continue;
    }
    std::int64_t reach = z;
    Profit expect = K.q[z];
    for (auto [w, cnt] : Y.x(i)) {
      if (!K.in_universe(w) || cnt < 1 || cnt > K.fn(w).cap()) {
        fail(i, "multiplicity outside the domain of Q_w");
        continue;
      }
      reach += w * cnt;
      expect = expect + K.fn(w)(cnt);
    }
    if (reach != i) fail(i, "weight identity z + sum w x_w = i violated");
    if (Y.r(i).is_finite() && Y.r(i) != expect) fail(i, "objective does not match q[z] + sum Q_w(x_w)");
    if (Y.r(i) < K.q[i]) fail(i, "objective below the trivial solution");
  }

  const std::size_t u = K.universe.size();
  if (u > 62) throw std::invalid_argument("relaxed_checker supports at most 62 weights");
  std::vector<std::int64_t> caps(u);
  double vectors = 1;
  for (std::size_t t = 0; t < u; ++t) {
    caps[t] = K.fn(K.universe[t]).cap();
    vectors *= static_cast<double>(caps[t] + 1);
  }
  if (vectors > static_cast<double>(max_vectors)) throw std::invalid_argument("relaxed_checker: enumeration too large");

  std::vector<std::uint64_t> hint_mask(static_cast<std::size_t>(2 * L + 1), 0);
  for (std::int64_t i = -L; i <= L; ++i)
    for (Weight w : K.hint(i)) {
      auto t = std::lower_bound(K.universe.begin(), K.universe.end(), w) - K.universe.begin();
      hint_mask[static_cast<std::size_t>(i + L)] |= std::uint64_t{1} << t;
    }

  std::vector<Profit> best(static_cast<std::size_t>(2 * L + 1), Profit::bottom());
  std::vector<char> all_contained(static_cast<std::size_t>(2 * L + 1), 1);
  std::vector<std::int64_t> x(u, 0);
  while (true) {
    std::int64_t s = 0;
    Profit val(0);
    std::uint64_t supp = 0;
    for (std::size_t t = 0; t < u; ++t)
      if (x[t] > 0) {
        s += K.universe[t] * x[t];
        val = val + K.fn(K.universe[t])(x[t]);
        supp |= std::uint64_t{1} << t;
      }
    for (std::int64_t z = -L; z + s <= L; ++z) {
      if (K.q[z].is_bottom()) continue;
      auto slot = static_cast<std::size_t>(z + s + L);
      Profit cand = K.q[z] + val;
      bool contained = (supp & ~hint_mask[static_cast<std::size_t>(z + L)]) == 0;
      if (cand > best[slot]) {
        best[slot] = cand;
        all_contained[slot] = contained;
      } else if (cand == best[slot]) {
        all_contained[slot] = all_contained[slot] && contained;
      }
    }
    std::size_t t = 0;
    while (t < u && x[t] == caps[t]) x[t++] = 0;
    if (t == u) break;
    ++x[t];
  }
  for (std::int64_t i = -L; i <= L; ++i) {
    auto slot = static_cast<std::size_t>(i + L);
    if (best[slot].is_finite() && all_contained[slot] && Y.r(i) < best[slot])
      fail(i, "suboptimal although every maximizer respects the hint (got " + to_string(Y.r(i)) + ", optimum " +
                  to_string(best[slot]) + ")");
  }
  return v;
}

}  // namespace knapsack::extend
