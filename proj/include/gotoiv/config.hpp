#pragma once

#include <string>

namespace gotoiv {

enum class DomainKind { Integer, Wrapped };

// Precision knobs; all combinations are valid.
struct DomainConfig {
  DomainKind domain = DomainKind::Integer;
  bool arithmetic = false;
  bool bitwise = false;
  bool widening = false;
};

enum class StorageMode { FullCopy, SharedInterval, SharedDomainCow };

enum class InstrumentMode { None, Loop, GuardFull, GuardLocal, AllFull, AllLocal };

inline std::string domain_kind_name(DomainKind k) {
  return k == DomainKind::Integer ? "integer" : "wrapped";
}

inline std::string storage_mode_name(StorageMode m) {
  switch (m) {
    case StorageMode::FullCopy: return "full-copy";
    case StorageMode::SharedInterval: return "shared-interval";
    case StorageMode::SharedDomainCow: return "shared-domain-cow";
  }
  return {};
}

inline std::string instrument_mode_name(InstrumentMode m) {
  switch (m) {
    case InstrumentMode::None: return "none";
    case InstrumentMode::Loop: return "loop";
    case InstrumentMode::GuardFull: return "guard-full";
    case InstrumentMode::GuardLocal: return "guard-local";
    case InstrumentMode::AllFull: return "all-full";
    case InstrumentMode::AllLocal: return "all-local";
  }
  return {};
}

// Three-valued boolean: [0,0] false, [1,1] true, [0,1] maybe.
struct BoolInterval {
  enum Kind : uint8_t { Bottom, False, True, Maybe } kind = Maybe;

  static BoolInterval bottom() { return {Bottom}; }
  static BoolInterval of(bool b) { return {b ? True : False}; }
  static BoolInterval maybe() { return {Maybe}; }
  static BoolInterval from_flags(bool can_false, bool can_true) {
    if (can_false && can_true) return {Maybe};
    if (can_true) return {True};
    if (can_false) return {False};
    return {Bottom};
  }

  bool is_bottom() const { return kind == Bottom; }
  bool definitely_true() const { return kind == True; }
  bool definitely_false() const { return kind == False; }
  bool can_be_true() const { return kind == True || kind == Maybe; }
  bool can_be_false() const { return kind == False || kind == Maybe; }
  bool is_maybe() const { return kind == Maybe; }

  friend BoolInterval operator&&(BoolInterval a, BoolInterval b) {
    if (a.is_bottom() || b.is_bottom()) return bottom();
    return from_flags(a.can_be_false() || b.can_be_false(),
                      a.can_be_true() && b.can_be_true());
  }
  friend BoolInterval operator!(BoolInterval a) {
    if (a.is_bottom()) return bottom();
    return from_flags(a.can_be_true(), a.can_be_false());
  }
  friend bool operator==(const BoolInterval&, const BoolInterval&) = default;
};

}  // namespace gotoiv
