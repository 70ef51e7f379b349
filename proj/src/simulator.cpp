#include "blackout/simulator.hpp"

#include "blackout/error.hpp"

namespace blackout::sim {

ExecutionResult step(const pddl::State& state, const pddl::GroundAction& action, const pddl::Domain& domain) {
  const pddl::ActionSchema* schema = domain.find_action(action.name);
  if (!schema) throw ValidationError("unknown action '" + action.name + "'");
  const pddl::GroundedSchema g = pddl::ground(*schema, action.args);

  ExecutionResult result;
  result.next = state;
  for (const auto& atom : g.pre_pos)
    if (!state.count(atom)) result.violated_pos.insert(atom);
  for (const auto& atom : g.pre_neg)
    if (state.count(atom)) result.violated_neg.insert(atom);
  if (!result.violated_pos.empty() || !result.violated_neg.empty()) return result;

  result.ok = true;
  for (const auto& atom : g.eff_del) result.next.erase(atom);
  for (const auto& atom : g.eff_add) result.next.insert(atom);
  return result;
}

trace::Trajectory run_plan(const pddl::Problem& problem, std::span<const pddl::GroundAction> plan,
                           const pddl::Domain& domain, bool stop_on_failure) {
  trace::Trajectory t(problem.objects, problem.init);
  for (const auto& action : plan) {
    pddl::check_action(domain, problem.objects, action);
    ExecutionResult r = step(t.final_state(), action, domain);
    if (r.ok) {
      t.append_ok(action, std::move(r.next));
    } else {
      t.append_failed(action);
      if (stop_on_failure) break;
    }
  }
  return t;
}

bool satisfies(const pddl::State& state, std::span<const pddl::Literal> goal) {
  for (const auto& lit : goal)
    if (state.count(lit.atom) != static_cast<std::size_t>(lit.positive)) return false;
  return true;
}

}  // namespace blackout::sim
