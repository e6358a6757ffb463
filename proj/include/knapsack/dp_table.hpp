#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "knapsack/profit.hpp"

namespace knapsack {

// q[-L..L]; indices outside the range read as bottom.
class DpTable {
 public:
  DpTable() : values_(1) {}
  explicit DpTable(std::int64_t half_size)
      : half_size_(half_size), values_(static_cast<std::size_t>(2 * half_size + 1)) {}

  std::int64_t half_size() const { return half_size_; }
  std::int64_t cells() const { return 2 * half_size_ + 1; }

  Profit at(std::int64_t z) const {
    if (z < -half_size_ || z > half_size_) return Profit::bottom();
    return values_[static_cast<std::size_t>(z + half_size_)];
  }
  Profit& operator[](std::int64_t z) {
    assert(z >= -half_size_ && z <= half_size_);
    return values_[static_cast<std::size_t>(z + half_size_)];
  }
  Profit operator[](std::int64_t z) const {
    assert(z >= -half_size_ && z <= half_size_);
    return values_[static_cast<std::size_t>(z + half_size_)];
  }

  std::vector<Profit>& raw() { return values_; }
  const std::vector<Profit>& raw() const { return values_; }

  friend bool operator==(const DpTable&, const DpTable&) = default;

 private:
  std::int64_t half_size_ = 0;
  std::vector<Profit> values_;
};

DpTable dp_resize(const DpTable& q, std::int64_t new_half_size);

}  // namespace knapsack
