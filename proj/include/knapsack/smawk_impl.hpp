#pragma once

// Template bodies for smawk.hpp.

#include <algorithm>

namespace knapsack::smawk {

template <class Emit>
std::int64_t residue_maxima(std::span<const std::int64_t> col_pos, std::span<const Profit> col_val,
                            std::int64_t row_lo, std::int64_t row_hi, const ConcaveProfitFn& Q,
                            std::int64_t cap, Emit&& emit) {
  const std::int64_t nc = static_cast<std::int64_t>(col_pos.size());
  if (nc == 0) return 0;
  cap = std::min(cap, Q.cap());
  row_lo = std::max(row_lo, col_pos[0]);
  row_hi = std::min(row_hi, col_pos[static_cast<std::size_t>(nc - 1)] + cap);
  if (row_lo > row_hi) return 0;

  // Beyond the cap, Q continues linearly with slope -big. The extension
  // stays concave, and big exceeds the spread of every in-cap entry, so a
  // row whose maximum lands beyond the cap has no in-cap candidate at all.
  Wide vmin = col_val[0].value(), vmax = vmin;
  for (const Profit& v : col_val) {
    vmin = std::min(vmin, v.value());
    vmax = std::max(vmax, v.value());
  }
  Wide qmax = Q.max_on(cap).value();
  Wide qmin = std::min<Wide>(0, Q(cap).value());
  const Wide big = checked_add(checked_add(1, vmax - vmin), qmax - qmin);
  const Profit qcap = Q(cap);

  std::int64_t evals = 0;
  auto eval = [&](std::int64_t r, std::int64_t c) -> Profit {
    ++evals;
    std::int64_t x = row_lo + r - col_pos[static_cast<std::size_t>(c)];
    if (x < 0) return Profit::bottom();
    const Profit& base = col_val[static_cast<std::size_t>(c)];
    if (x <= cap) return base + Q(x);
    return base + (qcap - Profit(checked_mul(x - cap, big)));
  };
  Breakpoints bp = row_maxima(row_hi - row_lo + 1, nc, eval);
  for (std::int64_t c = 0; c < nc; ++c) {
    std::int64_t hi = std::min(bp[static_cast<std::size_t>(c + 1)],
                               col_pos[static_cast<std::size_t>(c)] + cap - row_lo + 1);
    if (bp[static_cast<std::size_t>(c)] < hi) emit(c, row_lo + bp[static_cast<std::size_t>(c)], row_lo + hi - 1);
  }
  return evals;
}

}  // namespace knapsack::smawk
