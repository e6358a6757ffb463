#include "knapsack/smawk.hpp"

#include <cassert>

namespace knapsack {

ConcaveProfitFn::ConcaveProfitFn(std::vector<Profit> prefix) : prefix_(std::move(prefix)) {
  if (prefix_.empty() || prefix_[0] != Profit(0))
    throw std::invalid_argument("concave profit function needs Q(0) = 0");
  for (std::size_t x = 1; x < prefix_.size(); ++x) {
    if (prefix_[x].is_bottom()) throw std::invalid_argument("concave profit function must be finite");
    if (x >= 2) assert(prefix_[x] - prefix_[x - 1] <= prefix_[x - 1] - prefix_[x - 2]);
    if (prefix_[x] > prefix_[static_cast<std::size_t>(peak_)]) peak_ = static_cast<std::int64_t>(x);
  }
}

ConcaveProfitFn ConcaveProfitFn::from_increments(std::span<const Wide> increments) {
  std::vector<Profit> p{Profit(0)};
  p.reserve(increments.size() + 1);
  for (Wide d : increments) p.push_back(p.back() + Profit(d));
  return ConcaveProfitFn(std::move(p));
}

namespace smawk {

std::vector<Profit> concave_maxplus_conv(std::span<const Profit> a, std::span<const Profit> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("convolution operands must be non-empty");
  const std::int64_t n = static_cast<std::int64_t>(a.size()) - 1;
  const std::int64_t m = static_cast<std::int64_t>(b.size()) - 1;
  ConcaveProfitFn Q(std::vector<Profit>(b.begin(), b.end()));
  std::vector<Profit> c(static_cast<std::size_t>(n + m + 1), Profit::bottom());
  std::vector<std::int64_t> pos;
  std::vector<Profit> val;
  for (std::int64_t j = 0; j <= n; ++j)
    if (a[static_cast<std::size_t>(j)].is_finite()) {
      pos.push_back(j);
      val.push_back(a[static_cast<std::size_t>(j)]);
    }
  residue_maxima(pos, val, 0, n + m, Q, m, [&](std::int64_t col, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i <= hi; ++i)
      c[static_cast<std::size_t>(i)] = val[static_cast<std::size_t>(col)] + Q(i - pos[static_cast<std::size_t>(col)]);
  });
  return c;
}

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

DpTable update_positive(const DpTable& q, Weight w, const ConcaveProfitFn& Q, std::int64_t cap_x,
                        std::int64_t new_half) {
  const std::int64_t L = q.half_size();
  DpTable out(new_half);
  std::vector<std::int64_t> pos;
  std::vector<Profit> val;
  for (std::int64_t c = 0; c < w; ++c) {
    // residue class c: index z = lo + k*w, position k
    const std::int64_t lo = -std::max(L, new_half) - w;
    const std::int64_t first = lo + floor_mod(c - lo, w);
    pos.clear();
    val.clear();
    std::int64_t z0 = -L + floor_mod(first + L, w);
    for (std::int64_t z = z0; z <= L; z += w) {
      Profit v = q[z];
      if (v.is_finite()) {
        pos.push_back((z - first) / w);
        val.push_back(v);
      }
    }
    if (pos.empty()) continue;
    std::int64_t r0 = -new_half + floor_mod(first + new_half, w);
    if (r0 > new_half) continue;
    residue_maxima(pos, val, (r0 - first) / w, (new_half - first) / w, Q, cap_x,
                   [&](std::int64_t col, std::int64_t lo, std::int64_t hi) {
                     for (std::int64_t k = lo; k <= hi; ++k)
                       out[first + k * w] = val[static_cast<std::size_t>(col)] + Q(k - pos[static_cast<std::size_t>(col)]);
                   });
  }
  return out;
}

DpTable mirror(const DpTable& q) {
  DpTable m(q.half_size());
  for (std::int64_t z = -q.half_size(); z <= q.half_size(); ++z) m[z] = q[-z];
  return m;
}

}  // namespace

DpTable batch_update_weight_class(const DpTable& q, Weight w, const ConcaveProfitFn& Q,
                                  std::int64_t cap_x, std::int64_t new_half_size, Direction dir) {
  if (w < 1) throw std::invalid_argument("weight must be positive");
  cap_x = std::min(cap_x, Q.cap());
  if (dir == Direction::positive) return update_positive(q, w, Q, cap_x, new_half_size);
  return mirror(update_positive(mirror(q), w, Q, cap_x, new_half_size));
}

}  // namespace smawk
}  // namespace knapsack
