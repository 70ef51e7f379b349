#pragma once

#include <span>

#include "blackout/pddl.hpp"
#include "blackout/trace.hpp"

namespace blackout::sim {

/// Outcome of applying one ground action. A failed result names exactly the
/// precondition literals the state violates and leaves `next` equal to the
/// input state.
struct ExecutionResult {
  bool ok = false;
  pddl::State next;
  pddl::AtomSet violated_pos;  // required atoms missing from the state
  pddl::AtomSet violated_neg;  // forbidden atoms present in the state
};

/// STRIPS application: next = (s \ del) ∪ add when every precondition holds.
/// Throws ValidationError for an unknown schema or a wrong argument count.
ExecutionResult step(const pddl::State& state, const pddl::GroundAction& action, const pddl::Domain& domain);

/// Executes `plan` from the problem's initial state. Failed steps are recorded
/// and leave the state unchanged; with `stop_on_failure` the run ends after
/// the first failure.
trace::Trajectory run_plan(const pddl::Problem& problem, std::span<const pddl::GroundAction> plan,
                           const pddl::Domain& domain, bool stop_on_failure = false);

/// True when every goal literal holds in `state`.
bool satisfies(const pddl::State& state, std::span<const pddl::Literal> goal);

}  // namespace blackout::sim
