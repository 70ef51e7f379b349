#include "blackout/pddl.hpp"

#include <algorithm>

#include "blackout/error.hpp"
#include "blackout/sexpr.hpp"

namespace blackout::pddl {

void TypeHierarchy::add(const std::string& name, const std::string& parent) {
  if (name == kRootType) {
    if (parent != kRootType) throw ValidationError("type 'object' cannot have a parent");
    return;
  }
  if (auto it = parent_.find(name); it != parent_.end()) {
    if (it->second == parent) return;
    throw ValidationError("type '" + name + "' declared with parents '" + it->second + "' and '" + parent + "'");
  }
  // Walk up from the new parent; reaching `name` means a cycle.
  std::string_view cursor = parent;
  for (std::size_t guard = 0; cursor != kRootType; ++guard) {
    if (cursor == name || guard > parent_.size()) throw ValidationError("type cycle through '" + name + "'");
    auto it = parent_.find(cursor);
    if (it == parent_.end()) break;
    cursor = it->second;
  }
  parent_.emplace(name, parent);
  order_.push_back(name);
}

bool TypeHierarchy::contains(std::string_view type) const {
  return type == kRootType || parent_.find(type) != parent_.end();
}

std::optional<std::string> TypeHierarchy::parent(std::string_view type) const {
  auto it = parent_.find(type);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

bool TypeHierarchy::is_subtype(std::string_view sub, std::string_view super) const {
  if (super == kRootType) return true;
  std::string_view cursor = sub;
  for (std::size_t guard = 0; guard <= parent_.size(); ++guard) {
    if (cursor == super) return true;
    auto it = parent_.find(cursor);
    if (it == parent_.end()) return false;
    cursor = it->second;
  }
  return false;
}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const std::string& a) { return is_variable(a); });
}

std::string Atom::to_string() const {
  std::string out = "(" + predicate;
  for (const auto& a : args) out += " " + a;
  return out + ")";
}

std::string Literal::to_string() const { return positive ? atom.to_string() : "(not " + atom.to_string() + ")"; }

std::string to_string(const State& state) {
  std::string out;
  for (const auto& atom : state) {
    if (!out.empty()) out += ' ';
    out += atom.to_string();
  }
  return out;
}

std::string GroundAction::to_string() const { return Atom{name, args}.to_string(); }

std::optional<std::size_t> ActionSchema::param_index(std::string_view variable) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].name == variable) return i;
  return std::nullopt;
}

const Predicate* Domain::find_predicate(std::string_view name) const {
  auto it = std::find_if(predicates.begin(), predicates.end(), [&](const Predicate& p) { return p.name == name; });
  return it == predicates.end() ? nullptr : &*it;
}

const ActionSchema* Domain::find_action(std::string_view name) const {
  auto it = std::find_if(actions.begin(), actions.end(), [&](const ActionSchema& a) { return a.name == name; });
  return it == actions.end() ? nullptr : &*it;
}

bool Domain::has_requirement(std::string_view req) const {
  return std::find(requirements.begin(), requirements.end(), req) != requirements.end();
}

void ObjectTable::add(const std::string& name, const std::string& type) {
  if (auto it = index_.find(name); it != index_.end()) {
    if (entries_[it->second].second == type) return;
    throw ValidationError("object '" + name + "' declared with types '" + entries_[it->second].second + "' and '" +
                          type + "'");
  }
  index_.emplace(name, entries_.size());
  entries_.emplace_back(name, type);
}

const std::string* ObjectTable::type_of(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

void check_atom(const Domain& domain, const ObjectTable& objects, const Atom& atom) {
  const Predicate* pred = domain.find_predicate(atom.predicate);
  if (!pred) throw ValidationError("unknown predicate '" + atom.predicate + "' in " + atom.to_string());
  if (pred->arity() != atom.args.size())
    throw ValidationError("arity mismatch in " + atom.to_string() + ": expected " + std::to_string(pred->arity()) +
                          " arguments");
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const std::string* type = objects.type_of(atom.args[i]);
    if (!type) throw ValidationError("unknown object '" + atom.args[i] + "' in " + atom.to_string());
    if (!domain.types.is_subtype(*type, pred->params[i]))
      throw ValidationError("type mismatch in " + atom.to_string() + ": '" + atom.args[i] + "' is a " + *type +
                            ", expected " + pred->params[i]);
  }
}

void check_action(const Domain& domain, const ObjectTable& objects, const GroundAction& action) {
  const ActionSchema* schema = domain.find_action(action.name);
  if (!schema) throw ValidationError("unknown action '" + action.name + "'");
  if (schema->params.size() != action.args.size())
    throw ValidationError("arity mismatch in " + action.to_string() + ": expected " +
                          std::to_string(schema->params.size()) + " arguments");
  for (std::size_t i = 0; i < action.args.size(); ++i) {
    const std::string* type = objects.type_of(action.args[i]);
    if (!type) throw ValidationError("unknown object '" + action.args[i] + "' in " + action.to_string());
    if (!domain.types.is_subtype(*type, schema->params[i].type))
      throw ValidationError("type mismatch in " + action.to_string() + ": '" + action.args[i] + "' is a " + *type +
                            ", expected " + schema->params[i].type);
  }
}

Atom generalize(const Atom& atom, std::span<const TypedParam> params, std::span<const std::string> binding) {
  if (params.size() != binding.size()) throw ValidationError("binding length does not match parameter list");
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& obj : atom.args) {
    auto it = std::find(binding.begin(), binding.end(), obj);
    if (it == binding.end()) throw ValidationError("object '" + obj + "' of " + atom.to_string() + " is not bound");
    out.args.push_back(params[static_cast<std::size_t>(it - binding.begin())].name);
  }
  return out;
}

AtomSet generalize(const AtomSet& atoms, std::span<const TypedParam> params, std::span<const std::string> binding) {
  AtomSet out;
  for (const auto& atom : atoms) out.insert(generalize(atom, params, binding));
  return out;
}

Atom substitute(const Atom& atom, const ActionSchema& schema, std::span<const std::string> binding) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& term : atom.args) {
    if (!is_variable(term)) {
      out.args.push_back(term);
      continue;
    }
    auto idx = schema.param_index(term);
    if (!idx || *idx >= binding.size())
      throw ValidationError("variable '" + term + "' is not a parameter of " + schema.name);
    out.args.push_back(binding[*idx]);
  }
  return out;
}

GroundedSchema ground(const ActionSchema& schema, std::span<const std::string> binding) {
  if (binding.size() != schema.params.size())
    throw ValidationError("action '" + schema.name + "' takes " + std::to_string(schema.params.size()) +
                          " arguments, got " + std::to_string(binding.size()));
  auto sub = [&](const AtomSet& in) {
    AtomSet out;
    for (const auto& a : in) out.insert(substitute(a, schema, binding));
    return out;
  };
  return {sub(schema.pre_pos), sub(schema.pre_neg), sub(schema.eff_add), sub(schema.eff_del)};
}

GroundedSchema ground(const ActionSchema& schema, const GroundAction& action, const Domain& domain,
                      const ObjectTable& objects) {
  if (action.name != schema.name)
    throw ValidationError("action '" + action.name + "' grounded against schema '" + schema.name + "'");
  check_action(domain, objects, action);
  return ground(schema, action.args);
}

std::vector<GroundAction> parse_plan(std::string_view text) {
  std::vector<GroundAction> plan;
  for (const auto& expr : read_sexprs(text)) {
    if (!expr.is_list || expr.items.empty()) fail_at(expr, "expected (action-name object ...)");
    GroundAction action;
    for (const auto& item : expr.items) {
      if (item.is_list) fail_at(item, "nested list in plan step");
      if (action.name.empty())
        action.name = item.symbol;
      else
        action.args.push_back(item.symbol);
    }
    plan.push_back(std::move(action));
  }
  return plan;
}

std::string print_plan(std::span<const GroundAction> plan) {
  std::string out;
  for (const auto& step : plan) out += step.to_string() + "\n";
  return out;
}

}  // namespace blackout::pddl
