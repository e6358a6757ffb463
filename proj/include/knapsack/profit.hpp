#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace knapsack {

using Wide = __int128;

// Signed 128-bit profit with a distinguished bottom value. Bottom absorbs
// addition and compares below every finite value. Finite overflow throws.
class Profit {
 public:
  constexpr Profit() = default;
  constexpr Profit(Wide v) : v_(v) {}  // NOLINT: implicit from finite values

  static constexpr Profit bottom() {
    Profit p;
    p.v_ = kBottom;
    return p;
  }

  constexpr bool is_bottom() const { return v_ == kBottom; }
  constexpr bool is_finite() const { return v_ != kBottom; }
  constexpr Wide value() const { return v_; }

  friend Profit operator+(Profit a, Profit b) {
    if (a.is_bottom() || b.is_bottom()) return bottom();
    Wide r;
    if (__builtin_add_overflow(a.v_, b.v_, &r) || r == kBottom)
      throw std::overflow_error("profit overflow");
    return Profit(r);
  }
  friend Profit operator-(Profit a, Profit b) {
    if (a.is_bottom() || b.is_bottom()) return bottom();
    Wide r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r) || r == kBottom)
      throw std::overflow_error("profit overflow");
    return Profit(r);
  }
  Profit& operator+=(Profit o) { return *this = *this + o; }

  friend constexpr bool operator==(Profit a, Profit b) { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(Profit a, Profit b) { return a.v_ <=> b.v_; }

 private:
  static constexpr Wide kBottom = std::numeric_limits<Wide>::min();
  Wide v_ = kBottom;
};

inline Profit max(Profit a, Profit b) { return a < b ? b : a; }

Wide checked_mul(Wide a, Wide b);
Wide checked_add(Wide a, Wide b);

std::string to_string(Wide v);
std::string to_string(Profit p);  // "bottom" for the sentinel
// Parses an optionally signed decimal integer; throws std::invalid_argument.
Wide parse_wide(const std::string& s);

}  // namespace knapsack
