#pragma once

#include <cassert>
#include <string>

#include "gotoiv/machine.hpp"

namespace gotoiv {

// Extended integer: a 128-bit value or one of the two infinities.
// Finite values stay within machine-integer magnitude; only
// multiplication can overflow 128 bits and it saturates.
struct ExtInt {
  enum Kind : uint8_t { NegInf, Finite, PosInf };
  Kind kind = Finite;
  int128 v = 0;

  static ExtInt neg_inf() { return {NegInf, 0}; }
  static ExtInt pos_inf() { return {PosInf, 0}; }
  static ExtInt of(int128 x) { return {Finite, x}; }

  bool finite() const { return kind == Finite; }

  friend bool operator==(const ExtInt& a, const ExtInt& b) {
    return a.kind == b.kind && (a.kind != Finite || a.v == b.v);
  }

  friend bool operator<(const ExtInt& a, const ExtInt& b) {
    if (a.kind == NegInf) return b.kind != NegInf;
    if (a.kind == PosInf) return false;
    if (b.kind == PosInf) return true;
    if (b.kind == NegInf) return false;
    return a.v < b.v;
  }
  friend bool operator<=(const ExtInt& a, const ExtInt& b) {
    return a == b || a < b;
  }
  friend bool operator>(const ExtInt& a, const ExtInt& b) { return b < a; }
  friend bool operator>=(const ExtInt& a, const ExtInt& b) { return b <= a; }

  friend ExtInt operator+(ExtInt a, ExtInt b) {
    if (!a.finite()) return a;
    if (!b.finite()) return b;
    return of(a.v + b.v);
  }
  friend ExtInt operator-(ExtInt a, ExtInt b) {
    if (!a.finite()) return a;
    if (b.kind == PosInf) return neg_inf();
    if (b.kind == NegInf) return pos_inf();
    return of(a.v - b.v);
  }
  friend ExtInt operator*(ExtInt a, ExtInt b) {
    bool az = a.finite() && a.v == 0;
    bool bz = b.finite() && b.v == 0;
    if (az || bz) return of(0);
    if (!a.finite() || !b.finite()) {
      bool aneg = a.kind == NegInf || (a.finite() && a.v < 0);
      bool bneg = b.kind == NegInf || (b.finite() && b.v < 0);
      return aneg == bneg ? pos_inf() : neg_inf();
    }
    int128 r;
    if (__builtin_mul_overflow(a.v, b.v, &r))
      return (a.v < 0) == (b.v < 0) ? pos_inf() : neg_inf();
    return of(r);
  }

  // Truncating division; caller guarantees the divisor excludes zero.
  friend ExtInt div_trunc(ExtInt a, ExtInt b) {
    assert(!(b.finite() && b.v == 0));
    if (!a.finite()) {
      bool bneg = b.kind == NegInf || (b.finite() && b.v < 0);
      bool aneg = a.kind == NegInf;
      if (!b.finite()) return of(0);  // unused sentinel, kept sound by caller
      return aneg == bneg ? pos_inf() : neg_inf();
    }
    if (!b.finite()) return of(0);
    return of(a.v / b.v);
  }

  std::string to_string() const {
    if (kind == NegInf) return "-inf";
    if (kind == PosInf) return "+inf";
    bool neg = v < 0;
    uint128 u = neg ? uint128(-v) : uint128(v);
    std::string s;
    do {
      s.insert(s.begin(), char('0' + int(u % 10)));
      u /= 10;
    } while (u != 0);
    return neg ? "-" + s : s;
  }
};

inline ExtInt ext_min(ExtInt a, ExtInt b) { return a < b ? a : b; }
inline ExtInt ext_max(ExtInt a, ExtInt b) { return a < b ? b : a; }

}  // namespace gotoiv
