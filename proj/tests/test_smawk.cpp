#include <doctest.h>

#include <cmath>
#include <random>

#include "knapsack/smawk.hpp"
#include "oracles.hpp"

using namespace knapsack;
using knapsack::smawk::Breakpoints;

namespace {

const Profit kBot = Profit::bottom();

Breakpoints run(const std::vector<std::vector<Profit>>& a, std::int64_t* evals = nullptr) {
  std::int64_t m = static_cast<std::int64_t>(a.size());
  std::int64_t n = static_cast<std::int64_t>(a[0].size());
  std::int64_t count = 0;
  auto bp = smawk::row_maxima(m, n, [&](std::int64_t i, std::int64_t j) {
    ++count;
    return a[i][j];
  });
  if (evals) *evals = count;
  return bp;
}

std::vector<std::int64_t> expand(const Breakpoints& bp, std::int64_t m) {
  std::vector<std::int64_t> arg(m, -1);
  for (std::size_t c = 0; c + 1 < bp.size(); ++c)
    for (std::int64_t r = bp[c]; r < bp[c + 1]; ++r) arg[r] = static_cast<std::int64_t>(c);
  return arg;
}

// A[i][j] = a[j] + b[i - off - j] below the staircase, built from a concave b.
std::vector<std::vector<Profit>> random_matrix(std::mt19937_64& rng, std::int64_t m, std::int64_t n) {
  auto b = oracle::random_concave(rng, m + n, 40);
  std::vector<Profit> a(n);
  for (auto& v : a) v = Profit(static_cast<Wide>(rng() % 200) - 100);
  std::int64_t off = static_cast<std::int64_t>(rng() % (n + 1)) - n / 2;
  // column positions with random gaps keep the staircase shape
  std::vector<std::int64_t> pos(n);
  std::int64_t p = 0;
  for (auto& x : pos) x = p, p += 1 + static_cast<std::int64_t>(rng() % 3);
  std::vector<std::vector<Profit>> A(m, std::vector<Profit>(n, kBot));
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < n; ++j) {
      std::int64_t x = i + off + pos[0] - pos[j];
      if (j == 0 && x < 0) x = 0;  // first column finite everywhere
      if (x >= 0 && x < static_cast<std::int64_t>(b.size())) A[i][j] = a[j] + b[x];
      else if (x >= 0) A[i][j] = a[j] + b.back() - Profit(1000 * (x - b.size() + 1));
    }
  return A;
}

}  // namespace

TEST_CASE("row maxima small examples") {
  CHECK(run({{Profit(5)}}) == Breakpoints{0, 1});
  std::vector<std::vector<Profit>> a{{Profit(0), kBot}, {Profit(1), Profit(3)}, {Profit(2), Profit(4)}};
  CHECK(run(a) == Breakpoints{0, 1, 3});
  // ties go to the leftmost column
  std::vector<std::vector<Profit>> t{{Profit(1), Profit(1)}, {Profit(1), Profit(1)}};
  CHECK(run(t) == Breakpoints{0, 2, 2});
  // all-bottom rows pick column 0
  std::vector<std::vector<Profit>> bb{{kBot, kBot}, {Profit(1), kBot}};
  CHECK(run(bb) == Breakpoints{0, 2, 2});
}

TEST_CASE("row maxima agree with the naive scan on random staircases") {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int rep = 0; rep < 500; ++rep) {
    std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 200);
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 50);
    auto A = random_matrix(rng, m, n);
    std::int64_t evals = 0;
    auto bp = run(A, &evals);
    REQUIRE(bp.size() == static_cast<std::size_t>(n + 1));
    CHECK(bp.front() == 0);
    CHECK(bp.back() == m);
    for (std::size_t c = 1; c < bp.size(); ++c) CHECK(bp[c - 1] <= bp[c]);
    CHECK(expand(bp, m) == oracle::naive_row_argmax(m, n, A));
    double shape = n * (1 + std::log2(std::ceil(double(m) / n)));
    worst = std::max(worst, evals / shape);
  }
  CHECK(worst <= 10.0);
  MESSAGE("max evaluations / (n(1+log2 ceil(m/n))) = " << worst);
}

TEST_CASE("concave max-plus convolution") {
  std::vector<Profit> a{Profit(0), Profit(1)}, b{Profit(0), Profit(5), Profit(7)};
  CHECK(smawk::concave_maxplus_conv(a, b) == std::vector<Profit>{Profit(0), Profit(5), Profit(7), Profit(8)});
  std::vector<Profit> id{Profit(0)};
  std::vector<Profit> x{Profit(3), kBot, Profit(-2)};
  CHECK(smawk::concave_maxplus_conv(x, id) == x);
  std::vector<Profit> c{kBot, Profit(0)}, d{Profit(0), Profit(2)};
  CHECK(smawk::concave_maxplus_conv(c, d) == std::vector<Profit>{kBot, Profit(0), Profit(2)});

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    std::size_t n = 1 + rng() % 30, m = rng() % 30;
    std::vector<Profit> aa(n);
    for (auto& v : aa) v = rng() % 4 == 0 ? kBot : Profit(static_cast<Wide>(rng() % 100) - 50);
    auto bb = oracle::random_concave(rng, static_cast<std::int64_t>(m), 20);
    CHECK(smawk::concave_maxplus_conv(aa, bb) == oracle::naive_conv(aa, bb));
  }
}

TEST_CASE("batch update worked examples") {
  DpTable q(0);
  q[0] = 0;
  std::vector<Wide> inc{5, 3};
  auto Q = ConcaveProfitFn::from_increments(inc);
  DpTable r = smawk::batch_update_weight_class(q, 2, Q, 2, 4, smawk::Direction::positive);
  CHECK(r[0] == Profit(0));
  CHECK(r[2] == Profit(5));
  CHECK(r[4] == Profit(8));
  CHECK(r[1].is_bottom());
  CHECK(r[-2].is_bottom());

  DpTable same = smawk::batch_update_weight_class(q, 2, ConcaveProfitFn(), 0, 4, smawk::Direction::positive);
  CHECK(same == dp_resize(q, 4));

  std::vector<Wide> neg{-4};
  DpTable n = smawk::batch_update_weight_class(q, 3, ConcaveProfitFn::from_increments(neg), 1, 3,
                                               smawk::Direction::negative);
  CHECK(n[-3] == Profit(-4));
  CHECK(n[0] == Profit(0));
  CHECK(n[3].is_bottom());
}

TEST_CASE("batch update agrees with naive enumeration") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 400; ++rep) {
    std::int64_t L = static_cast<std::int64_t>(rng() % 25);
    std::int64_t L2 = static_cast<std::int64_t>(rng() % 25);
    std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 7);
    DpTable q(L);
    for (std::int64_t z = -L; z <= L; ++z)
      if (rng() % 3) q[z] = Profit(static_cast<Wide>(rng() % 100) - 50);
    auto Q = oracle::random_concave(rng, static_cast<std::int64_t>(rng() % 8), 30);
    int sign = rng() % 2 ? 1 : -1;
    DpTable got = smawk::batch_update_weight_class(q, w, ConcaveProfitFn(Q), static_cast<std::int64_t>(Q.size()) - 1,
                                                   L2, sign > 0 ? smawk::Direction::positive : smawk::Direction::negative);
    CHECK(got == oracle::naive_batch(q, w, Q, L2, sign));
  }
}
