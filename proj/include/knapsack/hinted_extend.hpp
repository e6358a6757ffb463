#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knapsack/dp_table.hpp"
#include "knapsack/instance.hpp"
#include "knapsack/smawk.hpp"

namespace knapsack::extend {

// Append-only store of weight sets as persistent cons lists, so a set that
// extends another by one weight costs one node. Handle 0 is the empty set.
// Iteration order is insertion order for add() and newest-first for cons().
class SetStore {
 public:
  using Handle = std::int32_t;
  static constexpr Handle kEmpty = 0;

  struct Node {
    Weight weight;
    Handle next;
    std::int32_t size;
  };

  class Iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Weight;
    using difference_type = std::ptrdiff_t;
    using pointer = const Weight*;
    using reference = const Weight&;

    Iterator() = default;
    Iterator(const SetStore* s, Handle h) : s_(s), h_(h) {}
    reference operator*() const { return s_->nodes_[static_cast<std::size_t>(h_)].weight; }
    Iterator& operator++() {
      h_ = s_->nodes_[static_cast<std::size_t>(h_)].next;
      return *this;
    }
    Iterator operator++(int) {
      Iterator t = *this;
      ++*this;
      return t;
    }
    bool operator==(const Iterator& o) const { return h_ == o.h_; }

   private:
    const SetStore* s_ = nullptr;
    Handle h_ = kEmpty;
  };

  struct Range {
    Iterator first, last;
    std::int32_t count;
    Iterator begin() const { return first; }
    Iterator end() const { return last; }
    bool empty() const { return count == 0; }
    std::size_t size() const { return static_cast<std::size_t>(count); }
  };

  SetStore() = default;

  Handle add(std::span<const Weight> elems);
  Handle cons(Weight w, Handle tail);
  Range get(Handle h) const { return {Iterator(this, h), Iterator(this, kEmpty), set_size(h)}; }
  std::int32_t set_size(Handle h) const { return nodes_[static_cast<std::size_t>(h)].size; }
  bool contains(Handle h, Weight w) const;
  std::size_t size() const { return nodes_.size(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }
  // Keeps only sets reachable from roots, which are rewritten in place.
  void compact(std::vector<Handle>& roots);

 private:
  std::vector<Node> nodes_{Node{0, kEmpty, 0}};
};

class ProfitTable {
 public:
  void set(Weight w, ConcaveProfitFn fn);
  // Null when w has no function (treated as an empty class).
  const ConcaveProfitFn* find(Weight w) const;

 private:
  std::vector<Weight> weights_;
  std::vector<ConcaveProfitFn> fns_;
};

// Persistent singly linked lists of (weight, count) pairs. Lists share
// tails, so extending a solution by one weight costs one node.
class SupportPool {
 public:
  struct Node {
    std::int32_t weight;
    std::int32_t count;
    std::int32_t next;
  };
  static constexpr std::int32_t kNil = -1;

  std::int32_t push(Weight w, std::int64_t count, std::int32_t next) {
    if (nodes_.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) [[unlikely]]
      throw std::length_error("support pool is full");
    if (w > std::numeric_limits<std::int32_t>::max() || count > std::numeric_limits<std::int32_t>::max()) [[unlikely]]
      throw std::overflow_error("support entry out of range");
    nodes_.push_back({static_cast<std::int32_t>(w), static_cast<std::int32_t>(count), next});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }
  const Node& operator[](std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }
  // Rebuilds the pool keeping only nodes reachable from heads, which are
  // rewritten in place. Shared tails stay shared.
  void compact(std::vector<std::int32_t>& heads);
  // Copies the list at head from another pool into this one.
  std::int32_t import(const SupportPool& from, std::int32_t head, std::int32_t tail = kNil);

 private:
  std::vector<Node> nodes_;
};

// One HintedKnapsackExtend+ instance (U, {Q_w}, S[], q[]). Hints are
// handles into a shared store; the effective hint of i is store[h] & U, so
// restriction only swaps the universe.
struct HintedExtendInstance {
  std::vector<Weight> universe;  // ascending
  std::shared_ptr<const ProfitTable> profits;
  DpTable q;
  std::vector<SetStore::Handle> hints;  // hints[i + L]
  std::shared_ptr<const SetStore> store;

  // Builds a fresh store from explicit sets (sets[i + L]).
  static HintedExtendInstance make(std::vector<Weight> universe, std::shared_ptr<const ProfitTable> profits,
                                   DpTable q, const std::vector<std::vector<Weight>>& sets);

  std::int64_t half_size() const { return q.half_size(); }
  SetStore::Handle handle(std::int64_t i) const { return hints[static_cast<std::size_t>(i + half_size())]; }
  bool in_universe(Weight w) const;
  std::vector<Weight> hint(std::int64_t i) const;  // ascending
  std::size_t hint_size(std::int64_t i) const;
  const ConcaveProfitFn& fn(Weight w) const;
};

struct HintedExtendSolution {
  std::int64_t half = 0;
  std::vector<std::int64_t> base;     // z[i + L]
  std::vector<Profit> value;          // r[i + L]
  std::vector<std::int32_t> support;  // x[i + L] as a list in pool
  std::shared_ptr<SupportPool> pool;

  static HintedExtendSolution trivial(const DpTable& q);

  std::int64_t z(std::int64_t i) const { return base[static_cast<std::size_t>(i + half)]; }
  Profit r(std::int64_t i) const { return value[static_cast<std::size_t>(i + half)]; }
  std::int32_t head(std::int64_t i) const { return support[static_cast<std::size_t>(i + half)]; }
  // x[i] as (weight, multiplicity) pairs, ascending by weight.
  std::vector<std::pair<Weight, std::int64_t>> x(std::int64_t i) const;
};

struct ExtendStats {
  std::int64_t aps = 0;             // |P| produced by singleton stage 1
  std::int64_t bucket_inserts = 0;  // total AP insertions in stage 2
  std::int64_t singleton_calls = 0;
  std::int64_t smawk_evals = 0;
};

enum class Strategy {
  automatic,     // cheaper of color_coding and per_weight by a cost estimate
  color_coding,  // small-b / large-b decomposition via the singleton solver
  per_weight,    // one singleton step per weight of U, chained by composition
};

struct ExtendOptions {
  double beta = 12.0;
  Strategy strategy = Strategy::automatic;
  // Takes the large-b branch whenever b > 1 (with at least two colors),
  // regardless of the 2 log2(4L+2) threshold. For exercising that branch.
  bool force_large_b = false;
  ExtendStats* stats = nullptr;
};

HintedExtendSolution solve_singleton(const HintedExtendInstance& K, ExtendStats* stats = nullptr);

HintedExtendInstance restrict(const HintedExtendInstance& K, std::span<const Weight> V);
HintedExtendInstance apply_update(const HintedExtendInstance& K, std::span<const Weight> V,
                                  const HintedExtendSolution& Y);
HintedExtendSolution compose(const HintedExtendSolution& Y2, const HintedExtendSolution& Y1);
HintedExtendInstance entrywise_max_instances(const HintedExtendInstance& K1, const HintedExtendInstance& K2);
HintedExtendSolution entrywise_max_solutions(const HintedExtendSolution& Y1, const HintedExtendSolution& Y2);

HintedExtendSolution solve_small_b(const HintedExtendInstance& K, std::int64_t b, const ExtendOptions& opt = {});
// Color-coding solver: small-b directly below 2 log2(4L+2), otherwise a
// balls-and-bins split of U into classes solved by solve_small_b.
HintedExtendSolution solve(const HintedExtendInstance& K, std::int64_t b, const ExtendOptions& opt = {});
// Chains one singleton step per weight of U through apply_update/compose,
// done in place.
HintedExtendSolution solve_per_weight(const HintedExtendInstance& K, ExtendStats* stats = nullptr);
// Entry point used by the solver; honours opt.strategy.
HintedExtendSolution solve_dispatch(const HintedExtendInstance& K, std::int64_t b, const ExtendOptions& opt = {});
// Whether solve_dispatch would take the per-weight route.
bool prefers_per_weight(const HintedExtendInstance& K, std::int64_t b, Strategy strategy);

// Per-entry bookkeeping for the per-weight chain in place of x lists: the
// set of weights w with x_w == mark[w] (mark 0: never). A candidate whose
// set would grow past budget is not taken.
struct HintTracker {
  std::vector<std::int64_t> mark;  // by weight
  std::int64_t budget = 0;
  std::shared_ptr<SetStore> store;
};

// solve_per_weight with a tracker. Support lists stay empty; tracked[i + L]
// receives the handle of entry i in tr.store.
HintedExtendSolution solve_per_weight_tracked(const HintedExtendInstance& K, const HintTracker& tr,
                                              std::vector<SetStore::Handle>& tracked, ExtendStats* stats = nullptr);

struct Verdict {
  bool ok = true;
  std::vector<std::int64_t> failing;
  std::string message;
};

// Exhaustive check of the relaxed contract: feasibility identities at every
// index, and optimality wherever every maximizer obeys supp(x) in S[z].
// Throws std::invalid_argument if the enumeration would exceed max_vectors.
Verdict relaxed_checker(const HintedExtendInstance& K, const HintedExtendSolution& Y,
                        std::int64_t max_vectors = 2'000'000);

}  // namespace knapsack::extend
