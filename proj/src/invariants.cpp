#include "blackout/invariants.hpp"

#include <array>
#include <utility>

namespace blackout::learn {

namespace {

struct RelationNames {
  std::string_view symbol;
  std::string_view name;
};

constexpr std::array<RelationNames, kRelationCount> kNames{{
    {"⊥", "bottom"},
    {"∧", "and"},
    {"⇍", "not-converse"},
    {"p", "p"},
    {"⇏", "not-implies"},
    {"q", "q"},
    {"⊕", "xor"},
    {"∨", "or"},
    {"↓", "nor"},
    {"⊙", "xnor"},
    {"¬q", "not-q"},
    {"⇐", "converse"},
    {"¬p", "not-p"},
    {"⇒", "implies"},
    {"↑", "nand"},
    {"⊤", "top"},
}};

}  // namespace

std::string_view symbol(Relation r) { return kNames[static_cast<std::size_t>(r)].symbol; }
std::string_view name(Relation r) { return kNames[static_cast<std::size_t>(r)].name; }

std::string_view to_string(Resolution r) {
  switch (r) {
    case Resolution::kError: return "error";
    case Resolution::kConfirmP: return "confirm-p";
    case Resolution::kConfirmQ: return "confirm-q";
    case Resolution::kConfirmBoth: return "confirm-both";
    case Resolution::kNone: return "none";
  }
  return "none";
}

std::string Invariant::to_string() const {
  return key.p.to_string() + " " + std::string(symbol(relation())) + " " + key.q.to_string();
}

Invariant make_invariant(Slot a, Slot b, AllowedSet allowed_ab) {
  if (b < a) return {{std::move(b), std::move(a)}, transpose(allowed_ab)};
  return {{std::move(a), std::move(b)}, allowed_ab};
}

}  // namespace blackout::learn
