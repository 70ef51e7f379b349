#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "blackout/invariants.hpp"
#include "blackout/pddl.hpp"
#include "blackout/trace.hpp"

namespace blackout::learn {

/// Precondition candidates map each lifted literal to its confirmation mark.
using CandidateSet = std::map<pddl::Atom, bool>;

struct CandidateAction {
  std::string name;
  std::vector<pddl::TypedParam> params;
  CandidateSet pre_pos;
  CandidateSet pre_neg;
  pddl::AtomSet eff_add;
  pddl::AtomSet eff_del;
  bool observed = false;  // executed successfully at least once
  std::size_t successes = 0;
  std::size_t failures = 0;

  bool confirmed(const pddl::Atom& literal, bool positive) const;
  friend bool operator==(const CandidateAction&, const CandidateAction&) = default;
};

/// Learned action model, one entry per schema of the reference signature in
/// signature order.
class CandidateModel {
 public:
  CandidateModel() = default;
  explicit CandidateModel(const pddl::Domain& signature);

  const std::vector<CandidateAction>& actions() const { return actions_; }
  std::vector<CandidateAction>& actions() { return actions_; }
  const CandidateAction* find(std::string_view name) const;
  CandidateAction* find(std::string_view name);

  /// The observed actions as a PDDL domain over the signature's types and
  /// predicates. Unconfirmed candidates are included.
  pddl::Domain to_domain(const pddl::Domain& signature) const;

  friend bool operator==(const CandidateModel&, const CandidateModel&) = default;

 private:
  std::vector<CandidateAction> actions_;
};

/// Literals of one failed action instance that its candidate preconditions
/// blame for the failure.
struct ViolationRecord {
  pddl::GroundAction action;
  pddl::AtomSet r_pos;  // lifted positive candidates missing from the state
  pddl::AtomSet r_neg;  // lifted negative candidates present in the state
  bool confirming = false;
  std::size_t trajectory = 0;
  std::size_t index = 0;
};

struct Step2Result {
  CandidateModel model;
  std::vector<ViolationRecord> records;
};

struct Step3Result {
  CandidateModel model;
  std::vector<PrimitiveRule> rules;  // after filtering
  std::vector<Invariant> effect_invariants;
  std::vector<Invariant> init_invariants;
  std::vector<Invariant> invariants;  // merged
  std::vector<std::string> diagnostics;
};

/// Delta-state analysis of every successful transition. Precondition
/// candidates are intersected across occurrences of a schema; effects are
/// unioned. Throws ValidationError on an undeclared action or object, or when
/// the observed effects are not those of a deterministic STRIPS action.
CandidateModel step1_successful(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature);

/// Failed-action analysis. Single-literal violations are confirmed; actions
/// with at least one failure keep only confirmed preconditions.
Step2Result step2_failed(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature,
                         CandidateModel model);

// Invariant extraction, one function per stage.
std::vector<PrimitiveRule> extract_effect_rules(const CandidateModel& model);
std::vector<PrimitiveRule> filter_rules(std::vector<PrimitiveRule> rules, const CandidateModel& model);
std::vector<Invariant> merge_rules(std::span<const PrimitiveRule> rules);
std::vector<Invariant> init_invariants(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature);
/// Allowed-set union on shared keys. Keys only in `from_init` survive when
/// neither predicate occurs in any learned effect.
std::vector<Invariant> merge_invariants(std::span<const Invariant> from_effects, std::span<const Invariant> from_init,
                                        const CandidateModel& model);
/// Applies the invariant table to ambiguous records, confirming literals in
/// `model`. Returns one diagnostic line per error-class match.
std::vector<std::string> resolve(std::span<const ViolationRecord> records, std::span<const Invariant> invariants,
                                 CandidateModel& model);

Step3Result step3_invariants(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature,
                             CandidateModel model, std::span<const ViolationRecord> records);

struct LearnResult {
  CandidateModel stage1;
  CandidateModel stage2;
  Step3Result stage3;
  std::vector<ViolationRecord> records;

  /// Model after `stage` (1, 2 or 3).
  const CandidateModel& model(int stage) const;
};

LearnResult learn(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature);

}  // namespace blackout::learn
