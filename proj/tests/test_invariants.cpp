#include <doctest.h>

#include <blackout/invariants.hpp>

#include <set>

using namespace blackout::learn;

namespace {

// Table of the sixteen relations written out by allowed combinations.
struct Row {
  const char* symbol;
  std::set<std::string> combos;
};

const Row kTable[] = {
    {"⊥", {}},
    {"∧", {"TT"}},
    {"⇍", {"TF"}},
    {"p", {"TT", "TF"}},
    {"⇏", {"FT"}},
    {"q", {"TT", "FT"}},
    {"⊕", {"TF", "FT"}},
    {"∨", {"TT", "TF", "FT"}},
    {"↓", {"FF"}},
    {"⊙", {"TT", "FF"}},
    {"¬q", {"TF", "FF"}},
    {"⇐", {"TT", "TF", "FF"}},
    {"¬p", {"FT", "FF"}},
    {"⇒", {"TT", "FT", "FF"}},
    {"↑", {"TF", "FT", "FF"}},
    {"⊤", {"TT", "TF", "FT", "FF"}},
};

AllowedSet mask_of(const std::set<std::string>& combos) {
  AllowedSet m = 0;
  if (combos.count("TT")) m |= kTT;
  if (combos.count("TF")) m |= kTF;
  if (combos.count("FT")) m |= kFT;
  if (combos.count("FF")) m |= kFF;
  return m;
}

std::set<std::string> combos_of(AllowedSet m) {
  std::set<std::string> out;
  if (m & kTT) out.insert("TT");
  if (m & kTF) out.insert("TF");
  if (m & kFT) out.insert("FT");
  if (m & kFF) out.insert("FF");
  return out;
}

}  // namespace

TEST_CASE("every subset decodes to itself") {
  for (unsigned s = 0; s < 16; ++s) {
    const auto set = static_cast<AllowedSet>(s);
    CHECK(allowed(classify(set)) == set);
  }
}

TEST_CASE("names follow the fixed bijection") {
  std::set<std::string_view> symbols, names;
  for (const auto& row : kTable) {
    CAPTURE(row.symbol);
    const Relation r = classify(mask_of(row.combos));
    CHECK(symbol(r) == row.symbol);
    CHECK(combos_of(allowed(r)) == row.combos);
    symbols.insert(symbol(r));
    names.insert(name(r));
  }
  CHECK(symbols.size() == 16);
  CHECK(names.size() == 16);
  CHECK(name(Relation::kXor) == "xor");
  CHECK(name(Relation::kNand) == "nand");
}

TEST_CASE("transpose swaps the roles of p and q") {
  CHECK(transpose(allowed(Relation::kImplies)) == allowed(Relation::kConverse));
  CHECK(transpose(allowed(Relation::kP)) == allowed(Relation::kQ));
  CHECK(transpose(allowed(Relation::kNotP)) == allowed(Relation::kNotQ));
  CHECK(transpose(allowed(Relation::kNotImplies)) == allowed(Relation::kNotConverse));
  for (unsigned s = 0; s < 16; ++s) {
    const auto set = static_cast<AllowedSet>(s);
    CHECK(transpose(transpose(set)) == set);
  }
  for (Relation r : {Relation::kXor, Relation::kXnor, Relation::kAnd, Relation::kNor, Relation::kNand,
                     Relation::kOr, Relation::kTop, Relation::kBottom})
    CHECK(transpose(allowed(r)) == allowed(r));
}

TEST_CASE("make_invariant canonicalises the key") {
  Slot clear{"clear", 0}, at{"at", 1};
  Invariant inv = make_invariant(clear, at, allowed(Relation::kImplies));
  CHECK(inv.key.p == at);
  CHECK(inv.key.q == clear);
  CHECK(inv.relation() == Relation::kConverse);
  CHECK(make_invariant(at, clear, kTF).allowed == kTF);
  CHECK(inv.to_string() == "at@1 ⇐ clear@0");
}

TEST_CASE("table of resolutions") {
  const std::set<std::string> error{"⊥", "∧", "⇍", "⇏", "↓"};
  const std::set<std::string> confirm_q{"p", "¬p"};
  const std::set<std::string> confirm_p{"q", "¬q"};
  const std::set<std::string> both{"⊕", "⊙"};
  for (const auto& row : kTable) {
    CAPTURE(row.symbol);
    const Resolution res = resolution(classify(mask_of(row.combos)));
    if (error.count(row.symbol))
      CHECK(res == Resolution::kError);
    else if (confirm_q.count(row.symbol))
      CHECK(res == Resolution::kConfirmQ);
    else if (confirm_p.count(row.symbol))
      CHECK(res == Resolution::kConfirmP);
    else if (both.count(row.symbol))
      CHECK(res == Resolution::kConfirmBoth);
    else
      CHECK(res == Resolution::kNone);
  }
  CHECK(to_string(Resolution::kConfirmBoth) == "confirm-both");
}
