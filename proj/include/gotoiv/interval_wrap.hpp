#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "gotoiv/bitwise_bounds.hpp"
#include "gotoiv/config.hpp"
#include "gotoiv/ext_int.hpp"
#include "gotoiv/machine.hpp"

namespace gotoiv {

// Wrapped interval: a clockwise arc <start, end> on the ring of w-bit
// patterns. The full ring is canonically <0, mask>; only that
// representative of cardinality 2^w is used.
struct WrapInterval {
  uint64_t start = 0;
  uint64_t end = 0;
  MachType type;
  bool bottom = false;

  friend bool operator==(const WrapInterval& a, const WrapInterval& b) {
    if (a.bottom != b.bottom || a.type != b.type) return false;
    return a.bottom || (a.start == b.start && a.end == b.end);
  }

  std::string to_string() const {
    if (bottom) return "bot";
    auto p = [&](uint64_t bits) {
      int128 v = type.value_of(bits);
      bool neg = v < 0;
      uint128 u = neg ? uint128(-v) : uint128(v);
      std::string s;
      do {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
      } while (u != 0);
      return neg ? "-" + s : s;
    };
    return "<" + p(start) + ", " + p(end) + ">";
  }
};

struct WrappedDomain {
  using Value = WrapInterval;
  static constexpr DomainKind kind = DomainKind::Wrapped;

  static Value bottom(MachType t) { return {0, 0, t, true}; }
  static Value init(MachType t) { return {0, t.mask(), t, false}; }

  static Value make(uint64_t s, uint64_t e, MachType t) {
    s &= t.mask();
    e &= t.mask();
    if (((e - s) & t.mask()) == t.mask()) return init(t);  // full ring
    return {s, e, t, false};
  }
  static Value constant(MachInt m) { return make(m.bits, m.bits, m.type); }
  static Value type_range(MachType t) { return init(t); }

  static bool is_bottom(const Value& v) { return v.bottom; }

  static uint128 card(const Value& v) {
    if (v.bottom) return 0;
    return uint128(((v.end - v.start) & v.type.mask())) + 1;
  }
  static bool is_full(const Value& v) {
    return !v.bottom && card(v) == v.type.cardinality();
  }

  static bool member(const Value& v, uint64_t bits) {
    if (v.bottom) return false;
    uint64_t m = v.type.mask();
    return ((bits - v.start) & m) <= ((v.end - v.start) & m);
  }
  static bool contains(const Value& v, MachInt x) { return member(v, x.bits); }

  // a contains b: b's arc must sit inside a's arc without wrapping past
  // a's end, so both offsets from a.start must be ordered and in range.
  static bool contains_interval(const Value& a, const Value& b) {
    if (b.bottom) return true;
    if (a.bottom) return false;
    if (is_full(a)) return true;
    if (is_full(b)) return false;
    uint64_t m = a.type.mask();
    uint64_t off_s = (b.start - a.start) & m;
    uint64_t off_e = (b.end - a.start) & m;
    return off_s <= off_e && uint128(off_e) < card(a);
  }

  static std::optional<MachInt> singleton(const Value& v) {
    if (v.bottom || card(v) != 1) return std::nullopt;
    return MachInt(v.start, v.type);
  }

  // Least cover in cardinality; ties prefer the smaller start pattern.
  static Value join(const Value& a, const Value& b) {
    if (a.bottom) return b;
    if (b.bottom) return a;
    if (contains_interval(a, b)) return a;
    if (contains_interval(b, a)) return b;
    bool bs_in = member(a, b.start);
    bool as_in = member(b, a.start);
    if (bs_in && as_in) return init(a.type);  // arcs cross twice
    if (bs_in) return make(a.start, b.end, a.type);
    if (as_in) return make(b.start, a.end, a.type);
    Value c1 = make(a.start, b.end, a.type);
    Value c2 = make(b.start, a.end, a.type);
    if (card(c1) != card(c2)) return card(c1) < card(c2) ? c1 : c2;
    return c1.start <= c2.start ? c1 : c2;
  }

  // Least single arc covering the intersection; a doubly-overlapping
  // pair intersects in two arcs whose least cover is the smaller input.
  static Value meet(const Value& a, const Value& b) {
    if (a.bottom || b.bottom) return bottom(a.type);
    if (contains_interval(a, b)) return b;
    if (contains_interval(b, a)) return a;
    bool bs_in = member(a, b.start);
    bool as_in = member(b, a.start);
    if (bs_in && as_in) {
      if (card(a) != card(b)) return card(a) < card(b) ? a : b;
      return a.start <= b.start ? a : b;
    }
    if (bs_in) return make(b.start, a.end, a.type);
    if (as_in) return make(a.start, b.end, a.type);
    return bottom(a.type);
  }

  // Grows the cover by at least its own size so chains terminate in
  // O(w) steps; anchored at the join so the result stays a cover.
  static Value widen(const Value& prev, const Value& next) {
    if (prev.bottom) return next;
    if (next.bottom) return prev;
    Value g = join(prev, next);
    if (g == prev) return prev;
    uint128 want = 2 * card(prev) + card(next);
    uint128 full = prev.type.cardinality();
    if (want > full) want = full;
    if (card(g) >= want) return g;
    return make(g.start, g.start + uint64_t(want) - 1, prev.type);
  }

  // --- value-space views ---------------------------------------------

  // Contiguous value ranges of the arc: at most two, split where the
  // pattern order wraps in value order (sign boundary, or mask -> 0).
  static std::vector<std::pair<int128, int128>> segments(const Value& v) {
    MachType t = v.type;
    uint64_t disc = t.is_signed ? (t.mask() >> 1) : t.mask();
    uint64_t m = t.mask();
    uint64_t off_d = (disc - v.start) & m;
    uint64_t len = (v.end - v.start) & m;
    if (off_d >= len)
      return {{t.value_of(v.start), t.value_of(v.end)}};
    return {{t.value_of(v.start), t.value_of(disc)},
            {t.value_of((disc + 1) & m), t.value_of(v.end)}};
  }

  // Wraps an arbitrary value range modulo 2^w; spans covering the whole
  // ring collapse to the full interval.
  static Value of_value_range(int128 lo, int128 hi, MachType t) {
    if (uint128(hi - lo) >= t.cardinality()) return init(t);
    return make(t.pattern_of(lo), t.pattern_of(hi), t);
  }

  static ExtInt lo_bound(const Value& v) {
    int128 best = 0;
    bool first = true;
    for (auto [l, u] : segments(v)) {
      (void)u;
      if (first || l < best) best = l;
      first = false;
    }
    return ExtInt::of(best);
  }
  static ExtInt hi_bound(const Value& v) {
    int128 best = 0;
    bool first = true;
    for (auto [l, u] : segments(v)) {
      (void)l;
      if (first || u > best) best = u;
      first = false;
    }
    return ExtInt::of(best);
  }

  // --- arithmetic -----------------------------------------------------

  template <class F>
  static Value segment_op(const Value& a, const Value& b, F&& range) {
    if (a.bottom || b.bottom) return bottom(a.type);
    Value acc = bottom(a.type);
    for (auto sa : segments(a))
      for (auto sb : segments(b)) {
        ExtInt lo, hi;
        range(sa, sb, lo, hi);
        if (!lo.finite() || !hi.finite()) return init(a.type);
        acc = join(acc, of_value_range(lo.v, hi.v, a.type));
        if (is_full(acc)) return acc;
      }
    return acc;
  }

  using Seg = std::pair<int128, int128>;

  static Value add(const Value& a, const Value& b) {
    return segment_op(a, b, [](Seg x, Seg y, ExtInt& lo, ExtInt& hi) {
      lo = ExtInt::of(x.first + y.first);
      hi = ExtInt::of(x.second + y.second);
    });
  }
  static Value sub(const Value& a, const Value& b) {
    return segment_op(a, b, [](Seg x, Seg y, ExtInt& lo, ExtInt& hi) {
      lo = ExtInt::of(x.first - y.second);
      hi = ExtInt::of(x.second - y.first);
    });
  }
  static Value mul(const Value& a, const Value& b) {
    return segment_op(a, b, [](Seg x, Seg y, ExtInt& lo, ExtInt& hi) {
      ExtInt c[4] = {ExtInt::of(x.first) * ExtInt::of(y.first),
                     ExtInt::of(x.first) * ExtInt::of(y.second),
                     ExtInt::of(x.second) * ExtInt::of(y.first),
                     ExtInt::of(x.second) * ExtInt::of(y.second)};
      lo = hi = c[0];
      for (const ExtInt& v : c) {
        lo = ext_min(lo, v);
        hi = ext_max(hi, v);
      }
    });
  }
  static Value divide(const Value& a, const Value& b) {
    if (a.bottom || b.bottom) return bottom(a.type);
    if (member(b, 0)) return init(a.type);  // division may fault
    // each divisor segment is sign-pure since it cannot contain zero
    return segment_op(a, b, [](Seg x, Seg y, ExtInt& lo, ExtInt& hi) {
      int128 c[4] = {x.first / y.first, x.first / y.second,
                     x.second / y.first, x.second / y.second};
      lo = hi = ExtInt::of(c[0]);
      for (int128 v : c) {
        lo = ext_min(lo, ExtInt::of(v));
        hi = ext_max(hi, ExtInt::of(v));
      }
    });
  }

  static Value shl(const Value& a, const Value& k) {
    if (a.bottom || k.bottom) return bottom(a.type);
    Value acc = bottom(a.type);
    for (unsigned s = 0; s < a.type.width; ++s) {
      if (!member(k, k.type.pattern_of(int128(s)))) continue;
      for (auto [l, u] : segments(a))
        acc = join(acc, of_value_range(l << s, u << s, a.type));
    }
    return acc;  // bottom when every amount faults
  }

  static Value shr(const Value& a, const Value& k) {
    if (a.bottom || k.bottom) return bottom(a.type);
    Value acc = bottom(a.type);
    for (unsigned s = 0; s < a.type.width; ++s) {
      if (!member(k, k.type.pattern_of(int128(s)))) continue;
      for (auto [l, u] : segments(a)) {
        int128 rl, rh;
        if (a.type.is_signed) {
          rl = l >> s;  // arithmetic: floor toward -inf
          rh = u >> s;
        } else {
          rl = int128(uint128(l) >> s);
          rh = int128(uint128(u) >> s);
        }
        acc = join(acc, of_value_range(rl, rh, a.type));
      }
    }
    return acc;
  }

  // --- bitwise --------------------------------------------------------

  // Contiguous pattern ranges of the arc: split only at mask -> 0.
  static std::vector<std::pair<uint64_t, uint64_t>> pattern_segments(
      const Value& v) {
    if (v.start <= v.end) return {{v.start, v.end}};
    return {{v.start, v.type.mask()}, {0, v.end}};
  }

  template <class F>
  static Value pattern_bitop(const Value& a, const Value& b, F&& bounds) {
    if (a.bottom || b.bottom) return bottom(a.type);
    Value acc = bottom(a.type);
    for (auto [al, ah] : pattern_segments(a))
      for (auto [bl, bh] : pattern_segments(b)) {
        auto [rl, rh] = bounds(al, ah, bl, bh);
        acc = join(acc, make(rl, rh, a.type));
        if (is_full(acc)) return acc;
      }
    return acc;
  }

  static Value bit_or(const Value& a, const Value& b) {
    return pattern_bitop(a, b, [](uint64_t x0, uint64_t x1, uint64_t y0,
                                  uint64_t y1) {
      return std::pair{bitbound::min_or(x0, x1, y0, y1),
                       bitbound::max_or(x0, x1, y0, y1)};
    });
  }
  static Value bit_and(const Value& a, const Value& b) {
    uint64_t m = a.type.mask();
    return pattern_bitop(a, b, [m](uint64_t x0, uint64_t x1, uint64_t y0,
                                   uint64_t y1) {
      return std::pair{bitbound::min_and(x0, x1, y0, y1, m),
                       bitbound::max_and(x0, x1, y0, y1, m)};
    });
  }
  static Value bit_xor(const Value& a, const Value& b) {
    uint64_t m = a.type.mask();
    return pattern_bitop(a, b, [m](uint64_t x0, uint64_t x1, uint64_t y0,
                                   uint64_t y1) {
      return std::pair{bitbound::min_xor(x0, x1, y0, y1, m),
                       bitbound::max_xor(x0, x1, y0, y1, m)};
    });
  }

  // Complement reverses ring orientation, mapping arcs to arcs exactly.
  static Value bit_not(const Value& a) {
    if (a.bottom) return a;
    return make(~a.end, ~a.start, a.type);
  }

  // Exact: each contiguous value segment reduces modulo 2^w' into the
  // target window, and short segments stay contiguous there.
  static Value cast(const Value& a, MachType to) {
    if (a.bottom) return bottom(to);
    Value acc = bottom(to);
    for (auto [l, u] : segments(a)) {
      acc = join(acc, of_value_range(l, u, to));
      if (is_full(acc)) return acc;
    }
    return acc;
  }

  // --- booleans -------------------------------------------------------

  static BoolInterval le(const Value& a, const Value& b) {
    if (a.bottom || b.bottom) return BoolInterval::bottom();
    if (hi_bound(a).v <= lo_bound(b).v) return BoolInterval::of(true);
    if (hi_bound(b).v < lo_bound(a).v) return BoolInterval::of(false);
    return BoolInterval::maybe();
  }

  static BoolInterval truth(const Value& a) {
    if (a.bottom) return BoolInterval::bottom();
    bool can_false = member(a, 0);
    bool can_true = !(card(a) == 1 && a.start == 0);
    return BoolInterval::from_flags(can_false, can_true);
  }

  static Value from_bool(BoolInterval b, MachType t) {
    if (b.is_bottom()) return bottom(t);
    if (b.definitely_false()) return make(0, 0, t);
    if (b.definitely_true()) return make(1, 1, t);
    return make(0, 1, t);
  }

  // --- restriction ----------------------------------------------------

  static Value bound_le(const Value& v, int128 c) {
    MachType t = v.type;
    if (c < t.min_value()) return bottom(t);
    if (c >= t.max_value()) return v;
    return meet(v, make(t.pattern_of(t.min_value()), t.pattern_of(c), t));
  }
  static Value bound_ge(const Value& v, int128 c) {
    MachType t = v.type;
    if (c > t.max_value()) return bottom(t);
    if (c <= t.min_value()) return v;
    return meet(v, make(t.pattern_of(c), t.pattern_of(t.max_value()), t));
  }
  static Value only_zero(const Value& v) {
    return meet(v, make(0, 0, v.type));
  }
  static Value without_zero(const Value& v) {
    if (v.bottom) return v;
    return meet(v, make(1, v.type.mask(), v.type));
  }

  static std::string key(const Value& v) {
    if (v.bottom) return "bot@" + v.type.to_string();
    return "<" + std::to_string(v.start) + "," + std::to_string(v.end) + ">@" +
           v.type.to_string();
  }
};

}  // namespace gotoiv
