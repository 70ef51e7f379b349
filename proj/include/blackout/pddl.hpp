#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blackout::pddl {

inline constexpr std::string_view kRootType = "object";

/// Variables carry a leading `?`; every other term names an object.
inline bool is_variable(std::string_view term) { return !term.empty() && term.front() == '?'; }

/// Single-inheritance type tree rooted at `object`.
class TypeHierarchy {
 public:
  /// Declares `name` below `parent`. Redeclaring with the same parent is a no-op.
  /// Throws ValidationError on a cycle or a conflicting parent.
  void add(const std::string& name, const std::string& parent = std::string(kRootType));

  bool contains(std::string_view type) const;
  std::optional<std::string> parent(std::string_view type) const;
  /// Reflexive: every type is a subtype of itself and of `object`.
  bool is_subtype(std::string_view sub, std::string_view super) const;
  /// Declared types (excluding `object`) in declaration order.
  const std::vector<std::string>& declared() const { return order_; }
  bool empty() const { return order_.empty(); }

  friend bool operator==(const TypeHierarchy& a, const TypeHierarchy& b) { return a.parent_ == b.parent_; }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string, std::less<>> parent_;
};

struct Predicate {
  std::string name;
  std::vector<std::string> params;  // parameter types

  std::size_t arity() const { return params.size(); }
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// A predicate applied to terms. Ground when no argument is a variable.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  bool is_ground() const;
  std::string to_string() const;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  std::string to_string() const;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using State = std::set<Atom>;
using AtomSet = std::set<Atom>;

std::string to_string(const State& state);

struct TypedParam {
  std::string name;  // includes the leading '?'
  std::string type = std::string(kRootType);
  friend bool operator==(const TypedParam&, const TypedParam&) = default;
};

/// A lifted STRIPS action. Literal sign is encoded by which set holds it.
struct ActionSchema {
  std::string name;
  std::vector<TypedParam> params;
  AtomSet pre_pos;
  AtomSet pre_neg;
  AtomSet eff_add;
  AtomSet eff_del;

  /// Index of the parameter named `variable`, if any.
  std::optional<std::size_t> param_index(std::string_view variable) const;
  std::size_t literal_count() const {
    return pre_pos.size() + pre_neg.size() + eff_add.size() + eff_del.size();
  }
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;  // without the leading ':'
  TypeHierarchy types;
  std::vector<Predicate> predicates;
  std::vector<ActionSchema> actions;

  const Predicate* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;
  bool has_requirement(std::string_view req) const;
  bool is_type(std::string_view type) const { return type == kRootType || types.contains(type); }
  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Object name to type, in declaration order.
class ObjectTable {
 public:
  /// Throws ValidationError if `name` is already declared with another type.
  void add(const std::string& name, const std::string& type);
  const std::string* type_of(std::string_view name) const;
  bool contains(std::string_view name) const { return type_of(name) != nullptr; }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  friend bool operator==(const ObjectTable& a, const ObjectTable& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct Problem {
  std::string name;
  std::string domain_name;
  ObjectTable objects;
  State init;
  std::vector<Literal> goal;
  friend bool operator==(const Problem&, const Problem&) = default;
};

struct GroundAction {
  std::string name;
  std::vector<std::string> args;

  std::string to_string() const;
  friend auto operator<=>(const GroundAction&, const GroundAction&) = default;
};

/// The four literal sets of a schema after variable substitution.
struct GroundedSchema {
  AtomSet pre_pos;
  AtomSet pre_neg;
  AtomSet eff_add;
  AtomSet eff_del;
};

// ---------------------------------------------------------------------------
// Text I/O

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);
std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem, const Domain& domain);

/// Reads a plan: one `(name o1 o2 ...)` per line, `;` comments ignored.
std::vector<GroundAction> parse_plan(std::string_view text);
std::string print_plan(std::span<const GroundAction> plan);

// ---------------------------------------------------------------------------
// Checking

/// Throws ValidationError unless `atom` is ground, its predicate is declared,
/// its arity matches and every object is declared with a compatible type.
void check_atom(const Domain& domain, const ObjectTable& objects, const Atom& atom);
/// Same for an action instance against its schema's parameter list.
void check_action(const Domain& domain, const ObjectTable& objects, const GroundAction& action);

// ---------------------------------------------------------------------------
// Lifting and grounding

/// Replaces every object of `atom` by the variable of the first parameter
/// position bound to that object. Throws ValidationError if an object is not
/// in `binding`.
Atom generalize(const Atom& atom, std::span<const TypedParam> params, std::span<const std::string> binding);
AtomSet generalize(const AtomSet& atoms, std::span<const TypedParam> params, std::span<const std::string> binding);

/// Substitutes each parameter variable by its bound object.
Atom substitute(const Atom& atom, const ActionSchema& schema, std::span<const std::string> binding);
/// Throws ValidationError if `binding` has the wrong length.
GroundedSchema ground(const ActionSchema& schema, std::span<const std::string> binding);
/// Also checks each bound object's type against its parameter.
GroundedSchema ground(const ActionSchema& schema, const GroundAction& action, const Domain& domain,
                      const ObjectTable& objects);

}  // namespace blackout::pddl
