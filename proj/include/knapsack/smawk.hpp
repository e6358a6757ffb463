#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "knapsack/dp_table.hpp"
#include "knapsack/instance.hpp"
#include "knapsack/profit.hpp"

namespace knapsack {

// Q with Q(0) = 0 and nonincreasing increments, defined on [0, cap].
class ConcaveProfitFn {
 public:
  ConcaveProfitFn() : prefix_{Profit(0)} {}
  explicit ConcaveProfitFn(std::vector<Profit> prefix);
  // Prefix sums of the given increments (which must be nonincreasing).
  static ConcaveProfitFn from_increments(std::span<const Wide> increments);

  std::int64_t cap() const { return static_cast<std::int64_t>(prefix_.size()) - 1; }
  Profit operator()(std::int64_t x) const { return prefix_[static_cast<std::size_t>(x)]; }
  const std::vector<Profit>& prefix() const { return prefix_; }
  // max of Q on [0, c]
  Profit max_on(std::int64_t c) const { return prefix_[static_cast<std::size_t>(std::min(c, peak_))]; }

 private:
  std::vector<Profit> prefix_;
  std::int64_t peak_ = 0;
};

namespace smawk {

// Breakpoints bp[0..cols]: rows bp[c] .. bp[c+1]-1 have column c as their
// leftmost maximum. bp[0] = 0 and bp[cols] = rows. Indices are 0-based.
using Breakpoints = std::vector<std::int64_t>;

namespace detail {

template <class Eval>
void smawk_rec(const std::vector<std::int64_t>& rows, const std::vector<std::int64_t>& cols,
               Eval& eval, std::vector<std::int64_t>& arg) {
  if (rows.empty()) return;
  std::vector<std::int64_t> st;
  st.reserve(rows.size());
  for (std::int64_t c : cols) {
    while (!st.empty()) {
      std::int64_t r = rows[st.size() - 1];
      if (eval(r, st.back()) < eval(r, c)) st.pop_back();
      else break;
    }
    if (st.size() < rows.size()) st.push_back(c);
  }
  std::vector<std::int64_t> odd;
  odd.reserve(rows.size() / 2);
  for (std::size_t i = 1; i < rows.size(); i += 2) odd.push_back(rows[i]);
  smawk_rec(odd, st, eval, arg);

  std::size_t k = 0;
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    std::int64_t last = i + 1 < rows.size() ? arg[rows[i + 1]] : st.back();
    std::int64_t best = st[k];
    Profit bv = eval(rows[i], st[k]);
    while (st[k] != last) {
      ++k;
      Profit v = eval(rows[i], st[k]);
      if (bv < v) bv = v, best = st[k];
    }
    arg[rows[i]] = best;
  }
}

struct Segment {
  std::int64_t row;
  std::int64_t col;
};

template <class Eval>
void fill_gap(std::int64_t rlo, std::int64_t rhi, std::int64_t clo, std::int64_t chi, Eval& eval,
              std::vector<Segment>& out) {
  if (rlo > rhi) return;
  if (clo == chi) {
    out.push_back({rlo, clo});
    return;
  }
  std::int64_t mid = rlo + (rhi - rlo) / 2;
  std::int64_t best = clo;
  Profit bv = eval(mid, clo);
  for (std::int64_t c = clo + 1; c <= chi; ++c) {
    Profit v = eval(mid, c);
    if (bv < v) bv = v, best = c;
  }
  fill_gap(rlo, mid - 1, clo, best, eval, out);
  out.push_back({mid, best});
  fill_gap(mid + 1, rhi, best, chi, eval, out);
}

}  // namespace detail

// Leftmost row maxima of an m x n reverse falling staircase, convex Monge
// matrix given by eval(i, j). Rows are sampled every ceil(m/n) and solved
// with SMAWK; the rows between samples are filled by divide and conquer
// inside the column window fixed by their neighbours.
template <class Eval>
Breakpoints row_maxima(std::int64_t m, std::int64_t n, Eval&& eval) {
  if (n < 1) throw std::invalid_argument("row_maxima needs at least one column");
  Breakpoints bp(static_cast<std::size_t>(n + 1), m);
  bp[0] = 0;
  if (m == 0) return bp;

  const std::int64_t gap = (m + n - 1) / n;
  std::vector<std::int64_t> sample_rows;
  for (std::int64_t r = 0; r < m; r += gap) sample_rows.push_back(r);
  std::vector<std::int64_t> positions(sample_rows.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = static_cast<std::int64_t>(i);
  std::vector<std::int64_t> cols(static_cast<std::size_t>(n));
  for (std::int64_t c = 0; c < n; ++c) cols[static_cast<std::size_t>(c)] = c;

  auto sampled = [&](std::int64_t pos, std::int64_t c) { return eval(sample_rows[pos], c); };
  std::vector<std::int64_t> arg(sample_rows.size());
  detail::smawk_rec(positions, cols, sampled, arg);

  std::vector<detail::Segment> segs;
  for (std::size_t k = 0; k < sample_rows.size(); ++k) {
    segs.push_back({sample_rows[k], arg[k]});
    std::int64_t lo = sample_rows[k] + 1;
    std::int64_t hi = k + 1 < sample_rows.size() ? sample_rows[k + 1] - 1 : m - 1;
    std::int64_t chi = k + 1 < sample_rows.size() ? arg[k + 1] : n - 1;
    detail::fill_gap(lo, hi, arg[k], chi, eval, segs);
  }

  std::int64_t next = 0;
  for (const auto& s : segs)
    while (next <= s.col) bp[static_cast<std::size_t>(next++)] = s.row;
  // columns beyond the last winner own no rows
  for (; next <= n; ++next) bp[static_cast<std::size_t>(next)] = m;
  return bp;
}

// c[i] = max_{0 <= j <= i} a[j] + b[i-j], for concave b.
std::vector<Profit> concave_maxplus_conv(std::span<const Profit> a, std::span<const Profit> b);

// One residue class of a weight-class update. Columns are base positions
// col_pos (strictly increasing, in units of the step) holding col_val;
// rows are the consecutive positions row_lo..row_hi. Entry (row, col) is
// col_val + Q(row - col_pos) when row >= col_pos. For each column, calls
// emit(col_index, first_row, last_row) with the contiguous rows it wins
// within Q's cap; rows without an in-cap candidate are skipped. Returns the
// number of matrix evaluations.
template <class Emit>
std::int64_t residue_maxima(std::span<const std::int64_t> col_pos, std::span<const Profit> col_val,
                            std::int64_t row_lo, std::int64_t row_hi, const ConcaveProfitFn& Q,
                            std::int64_t cap, Emit&& emit);

enum class Direction { positive, negative };

// q'[z'] = max_x q[z' -+ x*w] + Q(x) over 0 <= x <= cap_x, as a table of
// half size new_half_size.
DpTable batch_update_weight_class(const DpTable& q, Weight w, const ConcaveProfitFn& Q,
                                  std::int64_t cap_x, std::int64_t new_half_size, Direction dir);

}  // namespace smawk
}  // namespace knapsack

#include "knapsack/smawk_impl.hpp"
