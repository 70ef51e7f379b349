#include "blackout/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "blackout/error.hpp"

namespace blackout::eval {

double f1(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Scores score(const ConfusionCounts& c) {
  Scores s;
  s.precision_defined = c.tp + c.fp > 0;
  s.recall_defined = c.tp + c.fn > 0;
  s.precision = s.precision_defined ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  s.recall = s.recall_defined ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  s.f1 = c.tp == 0 ? 0.0 : f1(s.precision, s.recall);
  return s;
}

double f1(const ConfusionCounts& counts) { return score(counts).f1; }

namespace {

pddl::AtomSet canonical(const pddl::AtomSet& literals, const pddl::ActionSchema& schema) {
  pddl::AtomSet out;
  for (const auto& lit : literals) {
    pddl::Atom c{lit.predicate, {}};
    for (const auto& term : lit.args) {
      auto idx = pddl::is_variable(term) ? schema.param_index(term) : std::nullopt;
      c.args.push_back(idx ? "?" + std::to_string(*idx) : term);
    }
    out.insert(std::move(c));
  }
  return out;
}

void count_bucket(const pddl::AtomSet& learned, const pddl::AtomSet& truth, ConfusionCounts& c) {
  for (const auto& l : learned) (truth.count(l) ? c.tp : c.fp) += 1;
  for (const auto& t : truth)
    if (!learned.count(t)) ++c.fn;
}

}  // namespace

ConfusionCounts compare_action(const pddl::ActionSchema& learned, const pddl::ActionSchema& truth) {
  if (learned.params.size() != truth.params.size())
    throw ValidationError("action '" + truth.name + "': learned model has " + std::to_string(learned.params.size()) +
                          " parameters, ground truth has " + std::to_string(truth.params.size()));
  ConfusionCounts c;
  count_bucket(canonical(learned.pre_pos, learned), canonical(truth.pre_pos, truth), c);
  count_bucket(canonical(learned.pre_neg, learned), canonical(truth.pre_neg, truth), c);
  count_bucket(canonical(learned.eff_add, learned), canonical(truth.eff_add, truth), c);
  count_bucket(canonical(learned.eff_del, learned), canonical(truth.eff_del, truth), c);
  return c;
}

const ActionReport* ProficiencyReport::find(const std::string& action) const {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const ActionReport& r) { return r.action == action; });
  return it == rows.end() ? nullptr : &*it;
}

ProficiencyReport report(const pddl::Domain& learned, const pddl::Domain& truth) {
  for (const auto& a : learned.actions)
    if (!truth.find_action(a.name))
      throw ValidationError("learned action '" + a.name + "' does not exist in the ground-truth domain");
  ProficiencyReport r;
  for (const auto& t : truth.actions) {
    ActionReport row;
    row.action = t.name;
    if (const pddl::ActionSchema* l = learned.find_action(t.name)) {
      row.counts = compare_action(*l, t);
      row.scores = score(row.counts);
    } else {
      row.unobserved = true;
      row.counts.fn = t.literal_count();
      row.scores = score(row.counts);
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

ProficiencyReport report(const learn::CandidateModel& learned, const pddl::Domain& truth) {
  return report(learned.to_domain(truth), truth);
}

std::string format_text(const ProficiencyReport& r) {
  std::size_t width = 6;
  for (const auto& row : r.rows) width = std::max(width, row.action.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %4s %4s %4s %9s %9s %9s\n", static_cast<int>(width), "action", "tp", "fp", "fn",
                "precision", "recall", "f1");
  out += buf;
  for (const auto& row : r.rows) {
    if (row.unobserved) {
      std::snprintf(buf, sizeof buf, "%-*s %4s %4s %4s %9s %9s %9s\n", static_cast<int>(width), row.action.c_str(),
                    "-", "-", "-", "-", "-", "unobserved");
    } else {
      std::snprintf(buf, sizeof buf, "%-*s %4zu %4zu %4zu %9.4f %9.4f %9.4f%s\n", static_cast<int>(width),
                    row.action.c_str(), row.counts.tp, row.counts.fp, row.counts.fn, row.scores.precision,
                    row.scores.recall, row.scores.f1, row.scores.precision_defined ? "" : "  (precision undefined)");
    }
    out += buf;
  }
  return out;
}

std::string format_json(const ProficiencyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"action", row.action},
                    {"tp", row.counts.tp},
                    {"fp", row.counts.fp},
                    {"fn", row.counts.fn},
                    {"precision", row.scores.precision},
                    {"precision_defined", row.scores.precision_defined},
                    {"recall", row.scores.recall},
                    {"f1", row.scores.f1},
                    {"unobserved", row.unobserved}});
  }
  return rows.dump(2) + "\n";
}

}  // namespace blackout::eval
