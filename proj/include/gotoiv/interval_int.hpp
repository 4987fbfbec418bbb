#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "gotoiv/bitwise_bounds.hpp"
#include "gotoiv/config.hpp"
#include "gotoiv/ext_int.hpp"
#include "gotoiv/machine.hpp"

namespace gotoiv {

// Classic interval over the extended integers; the supremum is
// (-inf, +inf) regardless of the housed machine type.
struct IntInterval {
  ExtInt lo = ExtInt::neg_inf();
  ExtInt hi = ExtInt::pos_inf();
  MachType type;
  bool bottom = false;

  friend bool operator==(const IntInterval& a, const IntInterval& b) {
    if (a.bottom != b.bottom || a.type != b.type) return false;
    return a.bottom || (a.lo == b.lo && a.hi == b.hi);
  }

  std::string to_string() const {
    if (bottom) return "bot";
    return "[" + lo.to_string() + ", " + hi.to_string() + "]";
  }
};

struct IntegerDomain {
  using Value = IntInterval;
  static constexpr DomainKind kind = DomainKind::Integer;

  static Value bottom(MachType t) { return {ExtInt::of(0), ExtInt::of(0), t, true}; }
  static Value init(MachType t) { return {ExtInt::neg_inf(), ExtInt::pos_inf(), t, false}; }

  static Value make(ExtInt lo, ExtInt hi, MachType t) {
    if (hi < lo) return bottom(t);
    return {lo, hi, t, false};
  }
  static Value of_values(int128 lo, int128 hi, MachType t) {
    return make(ExtInt::of(lo), ExtInt::of(hi), t);
  }
  static Value constant(MachInt m) {
    return of_values(m.value(), m.value(), m.type);
  }
  static Value type_range(MachType t) {
    return of_values(t.min_value(), t.max_value(), t);
  }

  static bool is_bottom(const Value& v) { return v.bottom; }

  static Value join(const Value& a, const Value& b) {
    if (a.bottom) return b;
    if (b.bottom) return a;
    return make(ext_min(a.lo, b.lo), ext_max(a.hi, b.hi), a.type);
  }

  static Value meet(const Value& a, const Value& b) {
    if (a.bottom || b.bottom) return bottom(a.type);
    return make(ext_max(a.lo, b.lo), ext_min(a.hi, b.hi), a.type);
  }

  // a contains b
  static bool contains_interval(const Value& a, const Value& b) {
    if (b.bottom) return true;
    if (a.bottom) return false;
    return a.lo <= b.lo && b.hi <= a.hi;
  }

  static bool contains(const Value& a, MachInt v) {
    if (a.bottom) return false;
    ExtInt x = ExtInt::of(v.value());
    return a.lo <= x && x <= a.hi;
  }

  static std::optional<MachInt> singleton(const Value& a) {
    if (a.bottom || !(a.lo == a.hi) || !a.lo.finite()) return std::nullopt;
    return MachInt::from_value(a.lo.v, a.type);
  }

  // The extrapolate formula, verbatim four cases.
  static Value widen(const Value& prev, const Value& next) {
    if (prev.bottom) return next;
    if (next.bottom) return prev;
    bool low_grew = next.lo < prev.lo;
    bool high_grew = next.hi > prev.hi;
    if (low_grew && high_grew) return init(prev.type);
    if (high_grew) return {next.lo, ExtInt::pos_inf(), prev.type, false};
    if (low_grew) return {ExtInt::neg_inf(), next.hi, prev.type, false};
    return next;
  }

  static ExtInt lo_bound(const Value& v) { return v.lo; }
  static ExtInt hi_bound(const Value& v) { return v.hi; }

  // --- arithmetic -----------------------------------------------------

  // Results escaping the machine range become the full type range:
  // the concrete semantics wrap, so tighter out-of-range bounds would
  // be unsound.
  static Value clamp(const Value& v) {
    if (v.bottom) return v;
    ExtInt mn = ExtInt::of(v.type.min_value());
    ExtInt mx = ExtInt::of(v.type.max_value());
    if (v.lo < mn || v.hi > mx) return type_range(v.type);
    return v;
  }

  // Operands are always machine values; trims infinities before math.
  static Value narrow_operand(const Value& v) {
    return meet(v, type_range(v.type));
  }

  static Value add(const Value& a0, const Value& b0) {
    if (a0.bottom || b0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), b = narrow_operand(b0);
    return clamp(make(a.lo + b.lo, a.hi + b.hi, a.type));
  }

  static Value sub(const Value& a0, const Value& b0) {
    if (a0.bottom || b0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), b = narrow_operand(b0);
    return clamp(make(a.lo - b.hi, a.hi - b.lo, a.type));
  }

  static Value mul(const Value& a0, const Value& b0) {
    if (a0.bottom || b0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), b = narrow_operand(b0);
    ExtInt c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    ExtInt lo = c[0], hi = c[0];
    for (const ExtInt& x : c) {
      lo = ext_min(lo, x);
      hi = ext_max(hi, x);
    }
    return clamp(make(lo, hi, a.type));
  }

  static Value divide(const Value& a0, const Value& b0) {
    if (a0.bottom || b0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), b = narrow_operand(b0);
    if (b.lo <= ExtInt::of(0) && ExtInt::of(0) <= b.hi) return init(a.type);
    ExtInt c[4] = {div_trunc(a.lo, b.lo), div_trunc(a.lo, b.hi),
                   div_trunc(a.hi, b.lo), div_trunc(a.hi, b.hi)};
    ExtInt lo = c[0], hi = c[0];
    for (const ExtInt& x : c) {
      lo = ext_min(lo, x);
      hi = ext_max(hi, x);
    }
    return clamp(make(lo, hi, a.type));
  }

  // --- bitwise --------------------------------------------------------

  // Unsigned pattern ranges of a finite value interval: one range, or
  // two when a signed interval straddles zero.
  static std::vector<std::pair<uint64_t, uint64_t>> pattern_segments(
      const Value& v) {
    int128 l = v.lo.v, u = v.hi.v;
    MachType t = v.type;
    if (!t.is_signed || l >= 0) return {{t.pattern_of(l), t.pattern_of(u)}};
    if (u < 0) return {{t.pattern_of(l), t.pattern_of(u)}};
    return {{0, t.pattern_of(u)}, {t.pattern_of(l), t.mask()}};
  }

  // Hull of an unsigned pattern range reinterpreted in the type; a
  // range that crosses the sign boundary hulls to the full type range.
  static Value from_pattern_range(uint64_t rl, uint64_t rh, MachType t) {
    if (!t.is_signed) return of_values(int128(rl), int128(rh), t);
    uint64_t smax = t.mask() >> 1;
    if (rh <= smax || rl > smax)
      return of_values(t.value_of(rl), t.value_of(rh), t);
    return type_range(t);
  }

  template <class F>
  static Value segment_bitop(const Value& a0, const Value& b0, F&& bounds) {
    if (a0.bottom || b0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), b = narrow_operand(b0);
    Value acc = bottom(a.type);
    for (auto [al, ah] : pattern_segments(a))
      for (auto [bl, bh] : pattern_segments(b)) {
        auto [rl, rh] = bounds(al, ah, bl, bh);
        acc = join(acc, from_pattern_range(rl, rh, a.type));
      }
    return acc;
  }

  static Value bit_or(const Value& a, const Value& b) {
    return segment_bitop(a, b, [](uint64_t x0, uint64_t x1, uint64_t y0,
                                  uint64_t y1) {
      return std::pair{bitbound::min_or(x0, x1, y0, y1),
                       bitbound::max_or(x0, x1, y0, y1)};
    });
  }
  static Value bit_and(const Value& a, const Value& b) {
    uint64_t m = a.type.mask();
    return segment_bitop(a, b, [m](uint64_t x0, uint64_t x1, uint64_t y0,
                                   uint64_t y1) {
      return std::pair{bitbound::min_and(x0, x1, y0, y1, m),
                       bitbound::max_and(x0, x1, y0, y1, m)};
    });
  }
  static Value bit_xor(const Value& a, const Value& b) {
    uint64_t m = a.type.mask();
    return segment_bitop(a, b, [m](uint64_t x0, uint64_t x1, uint64_t y0,
                                   uint64_t y1) {
      return std::pair{bitbound::min_xor(x0, x1, y0, y1, m),
                       bitbound::max_xor(x0, x1, y0, y1, m)};
    });
  }

  // ~x is order-reversing on values: ~x = -x - 1 (signed) or mask - x.
  static Value bit_not(const Value& a0) {
    if (a0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0);
    MachType t = a.type;
    auto flip = [&](int128 v) {
      return t.is_signed ? -v - 1 : int128(t.mask()) - v;
    };
    return of_values(flip(a.hi.v), flip(a.lo.v), t);
  }

  static std::pair<int, int> shift_range(const Value& k, unsigned width) {
    int128 lo = k.lo.v < 0 ? 0 : k.lo.v;
    int128 hi = k.hi.v > int128(width - 1) ? int128(width - 1) : k.hi.v;
    return {int(int64_t(lo)), int(int64_t(hi))};
  }

  static Value shl(const Value& a0, const Value& k0) {
    if (a0.bottom || k0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), k = narrow_operand(k0);
    auto [klo, khi] = shift_range(k, a.type.width);
    if (klo > khi) return bottom(a.type);  // every amount faults
    Value acc = bottom(a.type);
    for (int s = klo; s <= khi; ++s) {
      ExtInt f = ExtInt::of(int128{1} << s);
      acc = join(acc, clamp(make(a.lo * f, a.hi * f, a.type)));
    }
    return acc;
  }

  static Value shr(const Value& a0, const Value& k0) {
    if (a0.bottom || k0.bottom) return bottom(a0.type);
    Value a = narrow_operand(a0), k = narrow_operand(k0);
    auto [klo, khi] = shift_range(k, a.type.width);
    if (klo > khi) return bottom(a.type);
    auto sh = [&](int128 v, int s) -> int128 {
      if (!a.type.is_signed)
        return int128(uint128(v) >> s);
      return v >> s;  // arithmetic: floor division by 2^s
    };
    Value acc = bottom(a.type);
    for (int s = klo; s <= khi; ++s)
      acc = join(acc, of_values(sh(a.lo.v, s), sh(a.hi.v, s), a.type));
    return acc;
  }

  // Reduce the value interval modulo 2^target-width into the target
  // window; exact when the image stays contiguous, else full range.
  static Value cast(const Value& a0, MachType to) {
    if (a0.bottom) return bottom(to);
    Value a = narrow_operand(a0);
    int128 span = a.hi.v - a.lo.v;
    int128 card = int128(uint128{1} << to.width);
    if (span >= card) return type_range(to);
    int128 offset = (a.lo.v - to.min_value()) % card;
    if (offset < 0) offset += card;
    if (offset + span < card)
      return of_values(to.min_value() + offset, to.min_value() + offset + span,
                       to);
    return type_range(to);
  }

  // --- booleans -------------------------------------------------------

  static BoolInterval le(const Value& a, const Value& b) {
    if (a.bottom || b.bottom) return BoolInterval::bottom();
    if (a.hi <= b.lo) return BoolInterval::of(true);
    if (b.hi < a.lo) return BoolInterval::of(false);
    return BoolInterval::maybe();
  }

  static BoolInterval truth(const Value& a) {
    if (a.bottom) return BoolInterval::bottom();
    bool can_false = contains_interval(a, constant(MachInt(0, a.type)));
    bool can_true = a.lo < ExtInt::of(0) || a.hi > ExtInt::of(0);
    return BoolInterval::from_flags(can_false, can_true);
  }

  static Value from_bool(BoolInterval b, MachType t) {
    if (b.is_bottom()) return bottom(t);
    int128 v0 = 0, v1 = t.value_of(1);
    if (b.definitely_false()) return of_values(0, 0, t);
    if (b.definitely_true()) return of_values(v1, v1, t);
    return of_values(std::min(v0, v1), std::max(v0, v1), t);
  }

  // --- restriction ----------------------------------------------------

  static Value bound_le(const Value& v, int128 c) {
    return meet(v, make(ExtInt::neg_inf(), ExtInt::of(c), v.type));
  }
  static Value bound_ge(const Value& v, int128 c) {
    return meet(v, make(ExtInt::of(c), ExtInt::pos_inf(), v.type));
  }
  static Value only_zero(const Value& v) {
    return meet(v, of_values(0, 0, v.type));
  }
  // Zero removal only tightens when it sits on an endpoint.
  static Value without_zero(const Value& v) {
    if (v.bottom) return v;
    Value out = v;
    if (out.lo == ExtInt::of(0) && out.hi == ExtInt::of(0))
      return bottom(v.type);
    if (out.lo == ExtInt::of(0)) out.lo = ExtInt::of(1);
    if (out.hi == ExtInt::of(0)) out.hi = ExtInt::of(-1);
    return out;
  }

  static std::string key(const Value& v) {
    return v.to_string() + "@" + v.type.to_string();
  }
};

}  // namespace gotoiv
