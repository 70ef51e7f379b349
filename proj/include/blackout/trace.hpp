#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "blackout/pddl.hpp"

namespace blackout::trace {

enum class Outcome { kOk, kFailed };

/// Read-only view of one ⟨s, a, s'⟩ step of a trajectory.
struct Transition {
  const pddl::State& pre;
  const pddl::GroundAction& action;
  Outcome outcome;
  const pddl::State& post;

  bool ok() const { return outcome == Outcome::kOk; }
};

/// Alternating sequence of fully observed states and attempted actions.
/// Chain consistency holds by construction: the post-state of step i is the
/// pre-state of step i+1, and failed steps repeat their pre-state.
class Trajectory {
 public:
  Trajectory() : states_{std::make_shared<const pddl::State>()} {}
  Trajectory(pddl::ObjectTable objects, pddl::State init)
      : objects_(std::move(objects)), states_{std::make_shared<const pddl::State>(std::move(init))} {}

  const pddl::ObjectTable& objects() const { return objects_; }
  const pddl::State& initial_state() const { return *states_.front(); }
  const pddl::State& final_state() const { return *states_.back(); }
  /// State before step `i`; `state(size())` is the final state.
  const pddl::State& state(std::size_t i) const { return *states_.at(i); }

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  Transition operator[](std::size_t i) const {
    return {*states_[i], steps_[i].action, steps_[i].outcome, *states_[i + 1]};
  }
  std::size_t failure_count() const;

  void append_ok(pddl::GroundAction action, pddl::State post);
  void append_failed(pddl::GroundAction action);

  friend bool operator==(const Trajectory& a, const Trajectory& b);

 private:
  struct Step {
    pddl::GroundAction action;
    Outcome outcome;
    friend bool operator==(const Step&, const Step&) = default;
  };

  pddl::ObjectTable objects_;
  std::vector<std::shared_ptr<const pddl::State>> states_;
  std::vector<Step> steps_;
};

/// Reads a `(trajectory ...)` file, validating typing against `domain` and
/// chain consistency. Throws ParseError, ValidationError or ChainError.
Trajectory parse_trace(std::string_view text, const pddl::Domain& domain);
/// Structure and chain checks only; atoms and actions are not typed.
Trajectory parse_trace(std::string_view text);

std::string write_trace(const Trajectory& t);

/// Failure-free export: `(:action ...)` blocks carry no outcome keyword.
std::string write_fama(const Trajectory& t);

Trajectory strip_failures(const Trajectory& t);

}  // namespace blackout::trace
