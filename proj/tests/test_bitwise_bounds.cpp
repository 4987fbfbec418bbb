#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "gotoiv/bitwise_bounds.hpp"

using namespace gotoiv;

namespace {

// Fixed-width 32-bit reference versions (Hacker's Delight, 2nd ed.,
// ch. 4-3), written independently of the mask-parameterized code under
// test: the candidate-bit scan runs top-down from the sign bit.
uint32_t ref_min_or(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  uint32_t m = 0x80000000u;
  while (m != 0) {
    if (~a & c & m) {
      uint32_t temp = (a | m) & (0 - m);
      if (temp <= b) {
        a = temp;
        break;
      }
    } else if (a & ~c & m) {
      uint32_t temp = (c | m) & (0 - m);
      if (temp <= d) {
        c = temp;
        break;
      }
    }
    m >>= 1;
  }
  return a | c;
}

uint32_t ref_max_or(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  uint32_t m = 0x80000000u;
  while (m != 0) {
    if (b & d & m) {
      uint32_t temp = (b - m) | (m - 1);
      if (temp >= a) {
        b = temp;
        break;
      }
      temp = (d - m) | (m - 1);
      if (temp >= c) {
        d = temp;
        break;
      }
    }
    m >>= 1;
  }
  return b | d;
}

uint32_t ref_min_and(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  return ~ref_max_or(~b, ~a, ~d, ~c);
}
uint32_t ref_max_and(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  uint32_t m = 0x80000000u;
  while (m != 0) {
    if (b & ~d & m) {
      uint32_t temp = (b & ~m) | (m - 1);
      if (temp >= a) {
        b = temp;
        break;
      }
    } else if (~b & d & m) {
      uint32_t temp = (d & ~m) | (m - 1);
      if (temp >= c) {
        d = temp;
        break;
      }
    }
    m >>= 1;
  }
  return b & d;
}

}  // namespace

TEST_CASE("small examples") {
  CHECK(bitbound::min_or(2, 3, 4, 5) == 6);
  CHECK(bitbound::max_or(2, 3, 4, 5) == 7);
  CHECK(bitbound::min_and(4, 7, 5, 6, 0xf) == 4);
  CHECK(bitbound::max_and(4, 7, 5, 6, 0xf) == 6);
  CHECK(bitbound::min_xor(0, 0, 9, 9, 0xf) == 9);
  CHECK(bitbound::max_xor(0, 0, 9, 9, 0xf) == 9);
}

TEST_CASE("exhaustively exact at four bits") {
  // all 136 x 136 pairs of nonempty unsigned intervals in [0,15]
  for (uint64_t a = 0; a < 16; ++a)
    for (uint64_t b = a; b < 16; ++b)
      for (uint64_t c = 0; c < 16; ++c)
        for (uint64_t d = c; d < 16; ++d) {
          uint64_t true_min[3] = {~0ull, ~0ull, ~0ull};
          uint64_t true_max[3] = {0, 0, 0};
          for (uint64_t x = a; x <= b; ++x)
            for (uint64_t y = c; y <= d; ++y) {
              uint64_t r[3] = {x | y, x & y, x ^ y};
              for (int k = 0; k < 3; ++k) {
                true_min[k] = std::min(true_min[k], r[k]);
                true_max[k] = std::max(true_max[k], r[k]);
              }
            }
          CAPTURE(a, b, c, d);
          CHECK(bitbound::min_or(a, b, c, d) == true_min[0]);
          CHECK(bitbound::max_or(a, b, c, d) == true_max[0]);
          CHECK(bitbound::min_and(a, b, c, d, 0xf) == true_min[1]);
          CHECK(bitbound::max_and(a, b, c, d, 0xf) == true_max[1]);
          CHECK(bitbound::min_xor(a, b, c, d, 0xf) == true_min[2]);
          CHECK(bitbound::max_xor(a, b, c, d, 0xf) == true_max[2]);
        }
}

TEST_CASE("agrees with the fixed-width reference at 32 bits") {
  std::mt19937_64 rng(42);
  const uint64_t mask = 0xffffffffull;
  for (int i = 0; i < 100000; ++i) {
    uint32_t a = uint32_t(rng()), b = uint32_t(rng());
    uint32_t c = uint32_t(rng()), d = uint32_t(rng());
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    CAPTURE(a, b, c, d);
    CHECK(bitbound::min_or(a, b, c, d) == ref_min_or(a, b, c, d));
    CHECK(bitbound::max_or(a, b, c, d) == ref_max_or(a, b, c, d));
    CHECK(bitbound::min_and(a, b, c, d, mask) == ref_min_and(a, b, c, d));
    CHECK(bitbound::max_and(a, b, c, d, mask) == ref_max_and(a, b, c, d));
  }
}

TEST_CASE("bounds are sound at 32 bits for sampled operands") {
  std::mt19937_64 rng(43);
  const uint64_t mask = 0xffffffffull;
  for (int i = 0; i < 20000; ++i) {
    uint32_t a = uint32_t(rng()), b = uint32_t(rng());
    uint32_t c = uint32_t(rng()), d = uint32_t(rng());
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    uint32_t x = a + uint32_t(rng() % (uint64_t(b) - a + 1));
    uint32_t y = c + uint32_t(rng() % (uint64_t(d) - c + 1));
    CAPTURE(a, b, c, d, x, y);
    CHECK(bitbound::min_or(a, b, c, d) <= (x | y));
    CHECK((x | y) <= bitbound::max_or(a, b, c, d));
    CHECK(bitbound::min_and(a, b, c, d, mask) <= (x & y));
    CHECK((x & y) <= bitbound::max_and(a, b, c, d, mask));
    CHECK(bitbound::min_xor(a, b, c, d, mask) <= (x ^ y));
    CHECK((x ^ y) <= bitbound::max_xor(a, b, c, d, mask));
  }
}
