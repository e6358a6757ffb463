#include "knapsack/profit.hpp"

#include <algorithm>

namespace knapsack {

Wide checked_mul(Wide a, Wide b) {
  Wide r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("wide multiplication overflow");
  return r;
}

Wide checked_add(Wide a, Wide b) {
  Wide r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("wide addition overflow");
  return r;
}

std::string to_string(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // work in the negative range so the minimum value is representable
  Wide x = neg ? v : -v;
  std::string s;
  while (x != 0) {
    int d = static_cast<int>(-(x % 10));
    s.push_back(static_cast<char>('0' + d));
    x /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(Profit p) { return p.is_bottom() ? "bottom" : to_string(p.value()); }

Wide parse_wide(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  Wide v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("not an integer: '" + s + "'");
    Wide d = s[i] - '0';
    if (__builtin_mul_overflow(v, Wide(10), &v) || __builtin_sub_overflow(v, d, &v))
      throw std::invalid_argument("integer out of range: '" + s + "'");
  }
  if (!neg) {
    if (v == std::numeric_limits<Wide>::min())
      throw std::invalid_argument("integer out of range: '" + s + "'");
    v = -v;
  }
  return v;
}

}  // namespace knapsack
