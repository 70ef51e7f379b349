#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace blackout::learn {

/// Presence/absence combination of two predicates on one object.
enum Combo : std::uint8_t {
  kTT = 1,  // p attached, q attached
  kTF = 2,  // p attached, q absent
  kFT = 4,
  kFF = 8,
};

/// Subset of {TT, TF, FT, FF} as a 4-bit mask.
using AllowedSet = std::uint8_t;

/// The sixteen binary relations between two predicates. Each enumerator's
/// value is its allowed-combination mask, so the mapping is a bijection.
enum class Relation : std::uint8_t {
  kBottom = 0,              // ⊥
  kAnd = kTT,               // p ∧ q
  kNotConverse = kTF,       // p ⇍ q
  kP = kTT | kTF,           // p
  kNotImplies = kFT,        // p ⇏ q
  kQ = kTT | kFT,           // q
  kXor = kTF | kFT,         // p ⊕ q
  kOr = kTT | kTF | kFT,    // p ∨ q
  kNor = kFF,               // p ↓ q
  kXnor = kTT | kFF,        // p ⊙ q
  kNotQ = kTF | kFF,        // ¬q
  kConverse = kTT | kTF | kFF,  // p ⇐ q
  kNotP = kFT | kFF,        // ¬p
  kImplies = kTT | kFT | kFF,   // p ⇒ q
  kNand = kTF | kFT | kFF,  // p ↑ q
  kTop = kTT | kTF | kFT | kFF,  // ⊤
};

inline constexpr std::size_t kRelationCount = 16;

constexpr Relation classify(AllowedSet allowed) { return static_cast<Relation>(allowed & 0xF); }
constexpr AllowedSet allowed(Relation r) { return static_cast<AllowedSet>(r); }
constexpr bool allows(Relation r, Combo c) { return (allowed(r) & c) != 0; }

/// Display symbol, e.g. "⊕".
std::string_view symbol(Relation r);
/// ASCII identifier, e.g. "xor".
std::string_view name(Relation r);

/// Swaps the roles of p and q (TF ↔ FT).
constexpr AllowedSet transpose(AllowedSet s) {
  return static_cast<AllowedSet>((s & (kTT | kFF)) | ((s & kTF) ? kFT : 0) | ((s & kFT) ? kTF : 0));
}

/// What to do with an ambiguous failure when an invariant over two of its
/// violated literals is known.
enum class Resolution { kError, kConfirmP, kConfirmQ, kConfirmBoth, kNone };

constexpr Resolution resolution(Relation r) {
  switch (r) {
    case Relation::kBottom:
    case Relation::kAnd:
    case Relation::kNotConverse:
    case Relation::kNotImplies:
    case Relation::kNor: return Resolution::kError;
    case Relation::kP:
    case Relation::kNotP: return Resolution::kConfirmQ;
    case Relation::kQ:
    case Relation::kNotQ: return Resolution::kConfirmP;
    case Relation::kXor:
    case Relation::kXnor: return Resolution::kConfirmBoth;
    case Relation::kOr:
    case Relation::kImplies:
    case Relation::kConverse:
    case Relation::kNand:
    case Relation::kTop: return Resolution::kNone;
  }
  return Resolution::kNone;
}

std::string_view to_string(Resolution r);

/// One argument position of one predicate.
struct Slot {
  std::string predicate;
  std::size_t position = 0;

  std::string to_string() const { return predicate + "@" + std::to_string(position); }
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

/// Co-occurrence of two effect literals sharing a variable within one action.
/// Identity ignores the variable name: the slots already fix where it sits.
struct PrimitiveRule {
  Slot p;
  Slot q;
  bool p_added = false;
  bool q_added = false;
  std::string variable;

  friend bool operator==(const PrimitiveRule& a, const PrimitiveRule& b) {
    return a.p == b.p && a.q == b.q && a.p_added == b.p_added && a.q_added == b.q_added;
  }
  friend auto operator<=>(const PrimitiveRule& a, const PrimitiveRule& b) {
    if (auto c = a.p <=> b.p; c != 0) return c;
    if (auto c = a.q <=> b.q; c != 0) return c;
    if (auto c = a.p_added <=> b.p_added; c != 0) return c;
    return a.q_added <=> b.q_added;
  }
};

/// Unordered slot pair stored with p < q.
struct InvariantKey {
  Slot p;
  Slot q;

  friend auto operator<=>(const InvariantKey&, const InvariantKey&) = default;
};

struct Invariant {
  InvariantKey key;
  AllowedSet allowed = 0;

  Relation relation() const { return classify(allowed); }
  std::string to_string() const;
  friend bool operator==(const Invariant&, const Invariant&) = default;
};

/// Builds a key with p < q, transposing `allowed` when the slots are swapped.
Invariant make_invariant(Slot a, Slot b, AllowedSet allowed_ab);

}  // namespace blackout::learn
