#pragma once

#include <cstdint>

namespace gotoiv {

// Interval bounds for bitwise operators on unsigned ranges [a,b] and
// [c,d], valid for any bit width up to 64. The scan walks candidate
// bits from least to most significant through the one-hot `lsb`, so no
// fixed-width sentinel is needed.
namespace bitbound {

// Largest value <= y reachable from x by setting one candidate bit of m
// and clearing everything below it.
inline uint64_t best_or(uint64_t x, uint64_t y, uint64_t m) {
  uint64_t best = x;
  while (m != 0) {
    uint64_t lsb = m & (0 - m);
    uint64_t tmp = (x | lsb) & (0 - lsb);
    if (tmp > y) break;
    best = tmp;
    m &= m - 1;
  }
  return best;
}

inline uint64_t min_or(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  uint64_t best_a = best_or(a, b, ~a & c);
  uint64_t best_c = best_or(c, d, a & ~c);
  uint64_t m = best_a | c;
  uint64_t n = a | best_c;
  return m < n ? m : n;
}

inline uint64_t max_or(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  uint64_t e = 0;
  uint64_t m = b & d;
  while (m != 0) {
    uint64_t lsb = m & (0 - m);
    uint64_t tmp_b = (b - lsb) | (lsb - 1);
    uint64_t tmp_d = (d - lsb) | (lsb - 1);
    if (tmp_b < a && tmp_d < c) break;
    e |= lsb - 1;
    m &= m - 1;
  }
  return b | d | e;
}

// AND and XOR reduce to OR through complements; `mask` selects the width.
inline uint64_t min_and(uint64_t a, uint64_t b, uint64_t c, uint64_t d,
                        uint64_t mask) {
  return ~max_or(~b & mask, ~a & mask, ~d & mask, ~c & mask) & mask;
}

inline uint64_t max_and(uint64_t a, uint64_t b, uint64_t c, uint64_t d,
                        uint64_t mask) {
  return ~min_or(~b & mask, ~a & mask, ~d & mask, ~c & mask) & mask;
}

inline uint64_t min_xor(uint64_t a, uint64_t b, uint64_t c, uint64_t d,
                        uint64_t mask) {
  return min_and(a, b, ~d & mask, ~c & mask, mask) |
         min_and(~b & mask, ~a & mask, c, d, mask);
}

inline uint64_t max_xor(uint64_t a, uint64_t b, uint64_t c, uint64_t d,
                        uint64_t mask) {
  return max_or(0, max_and(a, b, ~d & mask, ~c & mask, mask), 0,
                max_and(~b & mask, ~a & mask, c, d, mask));
}

}  // namespace bitbound

}  // namespace gotoiv
