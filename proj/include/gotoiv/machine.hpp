#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gotoiv {

using int128 = __int128;
using uint128 = unsigned __int128;

// A machine integer type: signedness plus a bit width in [1, 64].
struct MachType {
  bool is_signed = true;
  unsigned width = 32;

  constexpr uint64_t mask() const {
    return width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
  }

  // Smallest / largest representable value.
  constexpr int128 min_value() const {
    return is_signed ? -(int128{1} << (width - 1)) : int128{0};
  }
  constexpr int128 max_value() const {
    return is_signed ? (int128{1} << (width - 1)) - 1
                     : (int128{1} << width) - 1;
  }

  constexpr uint128 cardinality() const { return uint128{1} << width; }

  constexpr bool in_range(int128 v) const {
    return v >= min_value() && v <= max_value();
  }

  // Value of a bit pattern under this type's interpretation.
  constexpr int128 value_of(uint64_t bits) const {
    bits &= mask();
    if (is_signed && width < 64 && (bits >> (width - 1)))
      return int128(bits) - (int128{1} << width);
    if (is_signed && width == 64) return int128(int64_t(bits));
    return int128(bits);
  }

  // Bit pattern of a value; reduces modulo 2^width.
  constexpr uint64_t pattern_of(int128 v) const {
    return uint64_t(uint128(v)) & mask();
  }

  friend bool operator==(const MachType&, const MachType&) = default;
  friend auto operator<=>(const MachType&, const MachType&) = default;

  std::string to_string() const {
    return (is_signed ? "s" : "u") + std::to_string(width);
  }
};

// A typed machine integer, stored as a masked bit pattern.
struct MachInt {
  uint64_t bits = 0;
  MachType type;

  MachInt() = default;
  MachInt(uint64_t b, MachType t) : bits(b & t.mask()), type(t) {}

  static MachInt from_value(int128 v, MachType t) {
    return MachInt(t.pattern_of(v), t);
  }

  int128 value() const { return type.value_of(bits); }
  bool truthy() const { return bits != 0; }

  friend bool operator==(const MachInt&, const MachInt&) = default;
};

enum class FaultKind { DivByZero, ShiftOutOfRange };

struct EvalFault {
  FaultKind kind;
};

inline const char* fault_name(FaultKind k) {
  return k == FaultKind::DivByZero ? "div-by-zero" : "shift-out-of-range";
}

// C99-style machine arithmetic. Both operands share a type; signed
// overflow wraps in two's complement, matching the wrapped domain's
// modulo semantics.
namespace machop {

inline MachInt add(MachInt a, MachInt b) {
  return MachInt(a.bits + b.bits, a.type);
}
inline MachInt sub(MachInt a, MachInt b) {
  return MachInt(a.bits - b.bits, a.type);
}
inline MachInt mul(MachInt a, MachInt b) {
  return MachInt(a.bits * b.bits, a.type);
}

// Truncates toward zero; x/0 faults. s_min / -1 wraps.
inline MachInt div(MachInt a, MachInt b) {
  if (b.bits == 0) throw EvalFault{FaultKind::DivByZero};
  return MachInt::from_value(a.value() / b.value(), a.type);
}

inline MachInt bit_and(MachInt a, MachInt b) {
  return MachInt(a.bits & b.bits, a.type);
}
inline MachInt bit_or(MachInt a, MachInt b) {
  return MachInt(a.bits | b.bits, a.type);
}
inline MachInt bit_xor(MachInt a, MachInt b) {
  return MachInt(a.bits ^ b.bits, a.type);
}
inline MachInt bit_not(MachInt a) { return MachInt(~a.bits, a.type); }

inline unsigned shift_amount(MachInt b, unsigned width) {
  int128 k = b.value();
  if (k < 0 || k >= int128(width)) throw EvalFault{FaultKind::ShiftOutOfRange};
  return unsigned(int64_t(k));
}

inline MachInt shl(MachInt a, MachInt b) {
  unsigned k = shift_amount(b, a.type.width);
  return MachInt(a.bits << k, a.type);
}

// Arithmetic for signed operands, logical for unsigned.
inline MachInt shr(MachInt a, MachInt b) {
  unsigned k = shift_amount(b, a.type.width);
  if (a.type.is_signed) return MachInt::from_value(a.value() >> k, a.type);
  return MachInt(a.bits >> k, a.type);
}

inline MachInt cast(MachInt a, MachType to) {
  uint64_t wide =
      a.type.is_signed ? uint64_t(int64_t(a.value())) : (a.bits & a.type.mask());
  return MachInt(wide, to);
}

inline MachInt boolean(bool v, MachType t) { return MachInt(v ? 1 : 0, t); }

inline MachInt le(MachInt a, MachInt b) {
  return boolean(a.value() <= b.value(), a.type);
}
inline MachInt logical_and(MachInt a, MachInt b) {
  return boolean(a.truthy() && b.truthy(), a.type);
}
inline MachInt logical_not(MachInt a) { return boolean(!a.truthy(), a.type); }

}  // namespace machop

}  // namespace gotoiv
