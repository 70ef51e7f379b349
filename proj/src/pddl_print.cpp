#include <algorithm>
#include <sstream>

#include "blackout/pddl.hpp"

namespace blackout::pddl {

namespace {

bool is_typed(const Domain& d) { return d.has_requirement("typing") || !d.types.empty(); }

void print_conjunction(std::ostream& os, const AtomSet& pos, const AtomSet& neg) {
  os << "(and";
  for (const auto& a : pos) os << "\n      " << a.to_string();
  for (const auto& a : neg) os << "\n      (not " << a.to_string() << ")";
  os << ")";
}

}  // namespace

std::string print_domain(const Domain& d) {
  const bool typed = is_typed(d);
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << " :" << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    // Group children under their parent, parents in order of first use.
    std::vector<std::string> parents;
    for (const auto& t : d.types.declared()) {
      auto parent = *d.types.parent(t);
      if (std::find(parents.begin(), parents.end(), parent) == parents.end()) parents.push_back(parent);
    }
    os << "  (:types";
    for (std::size_t i = 0; i < parents.size(); ++i) {
      os << (i ? "\n          " : " ");
      for (const auto& t : d.types.declared())
        if (*d.types.parent(t) == parents[i]) os << t << " ";
      os << "- " << parents[i];
    }
    os << ")\n";
  }
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name;
    for (std::size_t i = 0; i < p.params.size(); ++i) {
      os << " ?x" << i;
      if (typed) os << " - " << p.params[i];
    }
    os << ")";
  }
  os << ")\n";
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n    :parameters (";
    for (std::size_t i = 0; i < a.params.size(); ++i) {
      if (i) os << " ";
      os << a.params[i].name;
      if (typed) os << " - " << a.params[i].type;
    }
    os << ")\n    :precondition ";
    print_conjunction(os, a.pre_pos, a.pre_neg);
    os << "\n    :effect ";
    print_conjunction(os, a.eff_add, a.eff_del);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const Problem& p, const Domain& d) {
  const bool typed = is_typed(d);
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << (p.domain_name.empty() ? d.name : p.domain_name) << ")\n";
  os << "  (:objects";
  for (const auto& [name, type] : p.objects.entries()) {
    os << "\n    " << name;
    if (typed) os << " - " << type;
  }
  os << ")\n  (:init";
  for (const auto& atom : p.init) os << "\n    " << atom.to_string();
  os << ")\n  (:goal (and";
  for (const auto& lit : p.goal) os << "\n    " << lit.to_string();
  os << "))\n)\n";
  return os.str();
}

}  // namespace blackout::pddl
