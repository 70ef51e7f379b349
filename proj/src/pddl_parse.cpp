#include <algorithm>
#include <array>

#include "blackout/error.hpp"
#include "blackout/pddl.hpp"
#include "blackout/sexpr.hpp"

namespace blackout::pddl {

namespace {

constexpr std::array kSupportedRequirements{"strips", "typing", "negative-preconditions"};

// Formula heads outside the STRIPS subset.
bool is_unsupported_head(std::string_view head) {
  static constexpr std::array kHeads{"or",     "imply",  "exists",   "forall",     "when",      "=",
                                     "increase", "decrease", "assign", "scale-up", "scale-down", "preference"};
  return std::find(kHeads.begin(), kHeads.end(), head) != kHeads.end();
}

const std::string& expect_symbol(const SExpr& e, const char* what) {
  if (!e.is_symbol()) fail_at(e, std::string("expected ") + what);
  return e.symbol;
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) fail_at(e, std::string("expected ") + what);
  return e;
}

/// `a b - t c - u d` starting at `begin`. Names without a type get `object`.
std::vector<std::pair<std::string, std::string>> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_list) fail_at(item, "unexpected list in typed list");
    if (item.symbol == "-") {
      if (i + 1 >= items.size()) fail_at(item, "missing type after '-'");
      const SExpr& type = items[++i];
      if (type.has_head("either")) throw UnsupportedError("either types");
      if (type.is_list) fail_at(type, "expected type name");
      if (pending.empty()) fail_at(item, "'-' without preceding names");
      for (auto& name : pending) out.emplace_back(std::move(name), type.symbol);
      pending.clear();
    } else {
      pending.push_back(item.symbol);
    }
  }
  for (auto& name : pending) out.emplace_back(std::move(name), std::string(kRootType));
  return out;
}

void check_formula_head(const SExpr& e) {
  if (e.is_list && !e.items.empty() && e.items.front().is_symbol() && is_unsupported_head(e.items.front().symbol)) {
    const auto& head = e.items.front().symbol;
    if (head == "when") throw UnsupportedError("conditional effects (when)");
    if (head == "forall" || head == "exists") throw UnsupportedError("quantifiers (" + head + ")");
    if (head == "=") throw UnsupportedError("equality (=)");
    if (head == "increase" || head == "decrease" || head == "assign" || head == "scale-up" || head == "scale-down")
      throw UnsupportedError("numeric effects / action costs (" + head + ")");
    throw UnsupportedError("formula operator '" + head + "'");
  }
}

Atom read_atom(const SExpr& e) {
  check_formula_head(e);
  if (!e.is_list || e.items.empty()) fail_at(e, "expected atom");
  Atom atom;
  atom.predicate = expect_symbol(e.items.front(), "predicate name");
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    if (e.items[i].is_list) {
      if (e.items[i].has_head("total-cost")) throw UnsupportedError("numeric fluents (total-cost)");
      fail_at(e.items[i], "expected term");
    }
    atom.args.push_back(e.items[i].symbol);
  }
  return atom;
}

/// Flattens a conjunction of literals into `out`.
void read_literals(const SExpr& e, std::vector<Literal>& out) {
  check_formula_head(e);
  if (e.has_head("and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) read_literals(e.items[i], out);
    return;
  }
  if (e.has_head("not")) {
    if (e.items.size() != 2) fail_at(e, "'not' takes one argument");
    if (e.items[1].has_head("not") || e.items[1].has_head("and")) throw UnsupportedError("nested negation");
    out.push_back({read_atom(e.items[1]), false});
    return;
  }
  if (e.is_list && e.items.empty()) return;  // ()
  out.push_back({read_atom(e), true});
}

void check_schema_atom(const Domain& d, const ActionSchema& a, const Atom& atom) {
  const Predicate* pred = d.find_predicate(atom.predicate);
  if (!pred) throw ValidationError("action '" + a.name + "': undeclared predicate '" + atom.predicate + "'");
  if (pred->arity() != atom.args.size())
    throw ValidationError("action '" + a.name + "': arity mismatch in " + atom.to_string());
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const auto& term = atom.args[i];
    if (!is_variable(term)) throw ValidationError("action '" + a.name + "': constant '" + term + "' not supported");
    auto idx = a.param_index(term);
    if (!idx) throw ValidationError("action '" + a.name + "': variable '" + term + "' is not a parameter");
    if (!d.types.is_subtype(a.params[*idx].type, pred->params[i]))
      throw ValidationError("action '" + a.name + "': " + term + " - " + a.params[*idx].type + " does not fit " +
                            pred->params[i] + " in " + atom.to_string());
  }
}

ActionSchema read_action(const SExpr& e, const Domain& d) {
  ActionSchema a;
  if (e.items.size() < 2) fail_at(e, "action without name");
  a.name = expect_symbol(e.items[1], "action name");
  if (d.find_action(a.name)) throw ValidationError("duplicate action '" + a.name + "'");
  for (std::size_t i = 2; i < e.items.size(); i += 2) {
    const auto& key = expect_symbol(e.items[i], "action keyword");
    if (i + 1 >= e.items.size()) fail_at(e.items[i], "missing value for " + key);
    const SExpr& value = e.items[i + 1];
    if (key == ":parameters") {
      for (auto& [name, type] : parse_typed_list(expect_list(value, "parameter list").items, 0)) {
        if (!is_variable(name)) fail_at(value, "parameter '" + name + "' must start with '?'");
        if (!d.is_type(type)) throw ValidationError("action '" + a.name + "': undeclared type '" + type + "'");
        if (a.param_index(name)) throw ValidationError("action '" + a.name + "': duplicate parameter " + name);
        a.params.push_back({std::move(name), std::move(type)});
      }
    } else if (key == ":precondition") {
      std::vector<Literal> lits;
      read_literals(value, lits);
      for (auto& l : lits) {
        check_schema_atom(d, a, l.atom);
        (l.positive ? a.pre_pos : a.pre_neg).insert(std::move(l.atom));
      }
    } else if (key == ":effect") {
      std::vector<Literal> lits;
      read_literals(value, lits);
      for (auto& l : lits) {
        check_schema_atom(d, a, l.atom);
        (l.positive ? a.eff_add : a.eff_del).insert(std::move(l.atom));
      }
    } else if (key == ":duration" || key == ":condition") {
      throw UnsupportedError("durative actions (" + key + ")");
    } else {
      fail_at(e.items[i], "unknown action keyword " + key);
    }
  }
  for (const auto& atom : a.eff_add)
    if (a.eff_del.count(atom))
      throw ValidationError("action '" + a.name + "': " + atom.to_string() + " is both added and deleted");
  return a;
}

const SExpr& expect_define(const std::vector<SExpr>& top, const char* kind) {
  if (top.empty()) throw ParseError("empty input", 1, 1);
  if (top.size() > 1) fail_at(top[1], "trailing content after define");
  const SExpr& def = top.front();
  if (!def.has_head("define")) fail_at(def, "expected (define ...)");
  if (def.items.size() < 2 || !def.items[1].has_head(kind) || def.items[1].items.size() != 2)
    fail_at(def, std::string("expected (") + kind + " name)");
  return def;
}

}  // namespace

Domain parse_domain(std::string_view text) {
  auto top = read_sexprs(text);
  const SExpr& def = expect_define(top, "domain");
  Domain d;
  d.name = expect_symbol(def.items[1].items[1], "domain name");

  // Types and predicates must precede actions; process sections in textual order.
  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const SExpr& section = expect_list(def.items[i], "domain section");
    if (section.items.empty()) fail_at(section, "empty section");
    const auto& key = expect_symbol(section.items.front(), "section keyword");
    if (key == ":requirements") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const auto& req = expect_symbol(section.items[j], "requirement");
        if (req.empty() || req.front() != ':') fail_at(section.items[j], "requirement must start with ':'");
        std::string name = req.substr(1);
        if (std::find(kSupportedRequirements.begin(), kSupportedRequirements.end(), name) ==
            kSupportedRequirements.end())
          throw UnsupportedError("requirement " + req);
        d.requirements.push_back(std::move(name));
      }
    } else if (key == ":types") {
      auto list = parse_typed_list(section.items, 1);
      for (const auto& [name, parent] : list) d.types.add(name, parent);
      for (const auto& [name, parent] : list)
        if (!d.is_type(parent)) throw ValidationError("undeclared parent type '" + parent + "' of '" + name + "'");
    } else if (key == ":predicates") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const SExpr& p = expect_list(section.items[j], "predicate declaration");
        if (p.items.empty()) fail_at(p, "empty predicate declaration");
        Predicate pred;
        pred.name = expect_symbol(p.items.front(), "predicate name");
        if (d.find_predicate(pred.name)) throw ValidationError("duplicate predicate '" + pred.name + "'");
        for (auto& [var, type] : parse_typed_list(p.items, 1)) {
          if (!is_variable(var)) fail_at(p, "predicate parameter '" + var + "' must start with '?'");
          if (!d.is_type(type)) throw ValidationError("predicate '" + pred.name + "': undeclared type '" + type + "'");
          pred.params.push_back(std::move(type));
        }
        d.predicates.push_back(std::move(pred));
      }
    } else if (key == ":action") {
      d.actions.push_back(read_action(section, d));
    } else if (key == ":functions") {
      throw UnsupportedError("numeric fluents (:functions)");
    } else if (key == ":constants") {
      throw UnsupportedError("domain constants (:constants)");
    } else if (key == ":derived") {
      throw UnsupportedError("derived predicates (:derived)");
    } else if (key == ":durative-action") {
      throw UnsupportedError("durative actions (:durative-action)");
    } else {
      fail_at(section, "unknown domain section " + key);
    }
  }
  return d;
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  auto top = read_sexprs(text);
  const SExpr& def = expect_define(top, "problem");
  Problem p;
  p.name = expect_symbol(def.items[1].items[1], "problem name");
  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const SExpr& section = expect_list(def.items[i], "problem section");
    if (section.items.empty()) fail_at(section, "empty section");
    const auto& key = expect_symbol(section.items.front(), "section keyword");
    if (key == ":domain") {
      if (section.items.size() != 2) fail_at(section, "expected (:domain name)");
      p.domain_name = expect_symbol(section.items[1], "domain name");
      if (p.domain_name != domain.name)
        throw ValidationError("problem is for domain '" + p.domain_name + "', not '" + domain.name + "'");
    } else if (key == ":objects") {
      for (const auto& [name, type] : parse_typed_list(section.items, 1)) {
        if (!domain.is_type(type)) throw ValidationError("object '" + name + "': unknown type '" + type + "'");
        p.objects.add(name, type);
      }
    } else if (key == ":init") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const SExpr& e = section.items[j];
        if (e.has_head("=")) throw UnsupportedError("numeric fluents (= in :init)");
        if (e.has_head("not")) fail_at(e, "negative literal in :init (closed-world initial state)");
        Atom atom = read_atom(e);
        check_atom(domain, p.objects, atom);
        p.init.insert(std::move(atom));
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) fail_at(section, "expected (:goal formula)");
      std::vector<Literal> lits;
      read_literals(section.items[1], lits);
      for (auto& l : lits) {
        check_atom(domain, p.objects, l.atom);
        p.goal.push_back(std::move(l));
      }
    } else if (key == ":metric") {
      throw UnsupportedError("plan metrics (:metric)");
    } else if (key == ":requirements") {
      continue;
    } else {
      fail_at(section, "unknown problem section " + key);
    }
  }
  return p;
}

}  // namespace blackout::pddl
