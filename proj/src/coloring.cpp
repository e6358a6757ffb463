#include "knapsack/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace knapsack::extend {

namespace {

std::vector<std::vector<std::int64_t>> incidence(const SetSystem& sets, std::int64_t n) {
  std::vector<std::vector<std::int64_t>> inc(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::int64_t e : sets[i]) {
      if (e < 0 || e >= n) throw std::out_of_range("set element outside the ground set");
      inc[static_cast<std::size_t>(e)].push_back(static_cast<std::int64_t>(i));
    }
  return inc;
}

}  // namespace

std::vector<int> det_set_balancing(const SetSystem& sets, std::int64_t n, std::int64_t b) {
  std::vector<int> sign(static_cast<std::size_t>(n), 1);
  const std::size_t m = sets.size();
  if (m == 0) return sign;
  for (const auto& s : sets) b = std::max<std::int64_t>(b, static_cast<std::int64_t>(s.size()));
  b = std::max<std::int64_t>(b, 1);
  auto inc = incidence(sets, n);

  // Estimator: sum_i 2 cosh(lambda D_i) cosh(lambda)^{u_i}, D_i the running
  // sum and u_i the uncolored count of S_i. Choosing +1 over -1 changes it by
  // 4 sinh(lambda) sum_i sinh(lambda D_i) cosh(lambda)^{u_i - 1}.
  const long double lambda = std::sqrt(2.0L * std::log(2.0L * m) / b);
  const long double ch = std::cosh(lambda);
  std::vector<std::int64_t> D(m, 0), u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = static_cast<std::int64_t>(sets[i].size());
  for (std::int64_t j = 0; j < n; ++j) {
    const auto& owners = inc[static_cast<std::size_t>(j)];
    if (owners.empty()) continue;
    long double drift = 0;
    for (std::int64_t i : owners)
      drift += std::sinh(lambda * D[static_cast<std::size_t>(i)]) *
               std::pow(ch, static_cast<long double>(u[static_cast<std::size_t>(i)] - 1));
    int s = drift <= 0 ? 1 : -1;
    sign[static_cast<std::size_t>(j)] = s;
    for (std::int64_t i : owners) {
      D[static_cast<std::size_t>(i)] += s;
      --u[static_cast<std::size_t>(i)];
    }
  }
  return sign;
}

std::vector<std::int64_t> det_balls_and_bins(const SetSystem& sets, std::int64_t n, std::int64_t r,
                                             double beta) {
  std::vector<std::int64_t> color(static_cast<std::size_t>(n), 0);
  std::int64_t colors = 1;
  while (colors * 2 <= r) colors *= 2;

  // Each level splits every color class in two by balancing the sets
  // restricted to that class.
  std::vector<std::int64_t> local(static_cast<std::size_t>(n), 0);
  for (std::int64_t width = 1; width < colors; width *= 2) {
    std::vector<SetSystem> parts(static_cast<std::size_t>(width));
    std::vector<std::vector<std::int64_t>> members(static_cast<std::size_t>(width));
    for (std::int64_t e = 0; e < n; ++e) {
      auto& mem = members[static_cast<std::size_t>(color[static_cast<std::size_t>(e)])];
      local[static_cast<std::size_t>(e)] = static_cast<std::int64_t>(mem.size());
      mem.push_back(e);
    }
    std::vector<std::vector<std::int64_t>> split(static_cast<std::size_t>(width));
    for (const auto& s : sets) {
      for (auto& v : split) v.clear();
      for (std::int64_t e : s)
        split[static_cast<std::size_t>(color[static_cast<std::size_t>(e)])].push_back(
            local[static_cast<std::size_t>(e)]);
      for (std::int64_t c = 0; c < width; ++c)
        if (!split[static_cast<std::size_t>(c)].empty())
          parts[static_cast<std::size_t>(c)].push_back(split[static_cast<std::size_t>(c)]);
    }
    for (std::int64_t c = 0; c < width; ++c) {
      const auto& mem = members[static_cast<std::size_t>(c)];
      std::int64_t bound = 0;
      for (const auto& s : parts[static_cast<std::size_t>(c)])
        bound = std::max<std::int64_t>(bound, static_cast<std::int64_t>(s.size()));
      auto sg = det_set_balancing(parts[static_cast<std::size_t>(c)], static_cast<std::int64_t>(mem.size()), bound);
      for (std::size_t k = 0; k < mem.size(); ++k)
        color[static_cast<std::size_t>(mem[k])] = 2 * c + (sg[k] > 0 ? 0 : 1);
    }
  }

  if (!sets.empty()) {
    const double limit = beta * std::log2(2.0 * static_cast<double>(sets.size()));
    std::vector<std::int64_t> count(static_cast<std::size_t>(colors), 0);
    for (const auto& s : sets) {
      std::fill(count.begin(), count.end(), 0);
      for (std::int64_t e : s)
        if (static_cast<double>(++count[static_cast<std::size_t>(color[static_cast<std::size_t>(e)])]) > limit)
          throw std::runtime_error("balls-and-bins: a color class exceeds beta*log2(2m); beta too small");
    }
  }
  return color;
}

std::vector<std::vector<std::int64_t>> det_isolating_colorings(const SetSystem& sets, std::int64_t n,
                                                               std::int64_t b) {
  b = std::max<std::int64_t>(b, 1);
  for (const auto& s : sets)
    if (static_cast<std::int64_t>(s.size()) > b) throw std::invalid_argument("set larger than the size bound");
  const std::int64_t palette = b * b;
  // Scaled estimator 2 b^2 p(x) for a set with x colored, collision-free
  // elements; a collided set counts 2 b^2.
  auto P2 = [b](std::int64_t x) { return 2 * x * (b - x) + (b - x) * (b - x - 1); };
  const std::int64_t collided_cost = 2 * palette;

  std::vector<std::int64_t> pending;
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i].size() >= 2) pending.push_back(static_cast<std::int64_t>(i));

  std::vector<std::vector<std::int64_t>> result;
  std::vector<std::int64_t> penalty(static_cast<std::size_t>(palette), 0);
  std::vector<char> touched(static_cast<std::size_t>(palette), 0);
  std::vector<std::int64_t> touched_list;
  do {
    std::vector<std::int64_t> h(static_cast<std::size_t>(n), 0);
    SetSystem active;
    for (std::int64_t i : pending) active.push_back(sets[static_cast<std::size_t>(i)]);
    auto inc = incidence(active, n);
    std::vector<char> collided(active.size(), 0);
    std::vector<std::vector<std::int64_t>> used(active.size());

    for (std::int64_t e = 0; e < n; ++e) {
      const auto& owners = inc[static_cast<std::size_t>(e)];
      if (owners.empty()) continue;
      touched_list.clear();
      for (std::int64_t i : owners) {
        if (collided[static_cast<std::size_t>(i)]) continue;
        const auto& u = used[static_cast<std::size_t>(i)];
        std::int64_t extra = collided_cost - P2(static_cast<std::int64_t>(u.size()) + 1);
        for (std::int64_t c : u) {
          if (!touched[static_cast<std::size_t>(c)]) {
            touched[static_cast<std::size_t>(c)] = 1;
            touched_list.push_back(c);
          }
          penalty[static_cast<std::size_t>(c)] += extra;
        }
      }
      // an untouched color adds no penalty; take the smallest such color
      std::int64_t pick = 0;
      while (pick < palette && touched[static_cast<std::size_t>(pick)]) ++pick;
      if (pick == palette) {
        pick = 0;
        for (std::int64_t c = 1; c < palette; ++c)
          if (penalty[static_cast<std::size_t>(c)] < penalty[static_cast<std::size_t>(pick)]) pick = c;
      }
      for (std::int64_t c : touched_list) {
        touched[static_cast<std::size_t>(c)] = 0;
        penalty[static_cast<std::size_t>(c)] = 0;
      }
      h[static_cast<std::size_t>(e)] = pick;
      for (std::int64_t i : owners) {
        if (collided[static_cast<std::size_t>(i)]) continue;
        auto& u = used[static_cast<std::size_t>(i)];
        if (std::find(u.begin(), u.end(), pick) != u.end()) collided[static_cast<std::size_t>(i)] = 1;
        else u.push_back(pick);
      }
    }

    std::vector<std::int64_t> next;
    for (std::size_t k = 0; k < active.size(); ++k)
      if (collided[k]) next.push_back(pending[k]);
    if (2 * next.size() >= pending.size() && !pending.empty())
      throw std::logic_error("isolating coloring round isolated fewer than half the sets");
    pending = std::move(next);
    result.push_back(std::move(h));
  } while (!pending.empty());
  return result;
}

}  // namespace knapsack::extend
