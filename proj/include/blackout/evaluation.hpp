#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blackout/learner.hpp"
#include "blackout/pddl.hpp"

namespace blackout::eval {

struct ConfusionCounts {
  std::size_t tp = 0;  // correct
  std::size_t fp = 0;  // extra
  std::size_t fn = 0;  // missing

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;  // false when tp + fp = 0
  bool recall_defined = true;     // false when tp + fn = 0
};

Scores score(const ConfusionCounts& counts);

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1(double precision, double recall);
double f1(const ConfusionCounts& counts);

/// Counts literal matches bucket by bucket (pre+, pre-, eff+, eff-). Variables
/// are renamed by parameter position before comparison, so `learned` and
/// `truth` may use different variable names. Throws ValidationError when the
/// parameter counts differ.
ConfusionCounts compare_action(const pddl::ActionSchema& learned, const pddl::ActionSchema& truth);

struct ActionReport {
  std::string action;
  ConfusionCounts counts;
  Scores scores;
  bool unobserved = false;
};

/// One row per ground-truth action, in the truth domain's order.
struct ProficiencyReport {
  std::vector<ActionReport> rows;

  const ActionReport* find(const std::string& action) const;
};

/// Scores each learned action against the truth. Truth actions missing from
/// `learned` are flagged unobserved. Throws ValidationError if `learned` has an
/// action the truth lacks.
ProficiencyReport report(const pddl::Domain& learned, const pddl::Domain& truth);
ProficiencyReport report(const learn::CandidateModel& learned, const pddl::Domain& truth);

/// Aligned plain-text table.
std::string format_text(const ProficiencyReport& r);
/// JSON array, one object per action.
std::string format_json(const ProficiencyReport& r);

}  // namespace blackout::eval
