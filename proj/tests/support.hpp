#pragma once

#include <blackout/learner.hpp>
#include <blackout/pddl.hpp>
#include <blackout/sokoban.hpp>
#include <blackout/trace.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline std::string data_path(const std::string& rel) { return std::string(BLACKOUT_DATA_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_data(const std::string& rel) { return read_file(data_path(rel)); }

inline const blackout::pddl::Domain& sokoban() {
  static const auto d = blackout::pddl::parse_domain(read_data("sokoban/domain.pddl"));
  return d;
}

inline blackout::trace::Trajectory load_trace(const std::string& rel, const blackout::pddl::Domain& d = sokoban()) {
  return blackout::trace::parse_trace(read_data(rel), d);
}

inline blackout::pddl::Atom atom(std::string pred, std::vector<std::string> args) {
  return {std::move(pred), std::move(args)};
}

// Single-row corridor "#@  #": walls pos-01-01 and pos-05-01, player on
// pos-02-01, free floor pos-03-01 and pos-04-01.
inline blackout::pddl::Problem corridor() {
  return blackout::sokoban::compile_level(blackout::sokoban::parse_level("#@  #", "corridor"));
}

inline blackout::pddl::GroundAction move(const std::string& from, const std::string& to, const std::string& dir) {
  return {"move", {"player-01", from, to, dir}};
}

// A candidate model holding exactly the schemas of `d`, all observed.
inline blackout::learn::CandidateModel truth_model(const blackout::pddl::Domain& d) {
  blackout::learn::CandidateModel m(d);
  for (auto& a : m.actions()) {
    const auto& schema = *d.find_action(a.name);
    for (const auto& l : schema.pre_pos) a.pre_pos[l] = false;
    for (const auto& l : schema.pre_neg) a.pre_neg[l] = false;
    a.eff_add = schema.eff_add;
    a.eff_del = schema.eff_del;
    a.observed = true;
  }
  return m;
}

// Direct scan: does `inv` hold for every object of `objects` that fits both
// slots in `state`?
inline bool invariant_holds(const blackout::learn::Invariant& inv, const blackout::pddl::State& state,
                            const blackout::pddl::ObjectTable& objects, const blackout::pddl::Domain& d) {
  const auto* pp = d.find_predicate(inv.key.p.predicate);
  const auto* pq = d.find_predicate(inv.key.q.predicate);
  for (const auto& [obj, type] : objects.entries()) {
    if (!d.types.is_subtype(type, pp->params[inv.key.p.position]) ||
        !d.types.is_subtype(type, pq->params[inv.key.q.position]))
      continue;
    bool hp = false, hq = false;
    for (const auto& a : state) {
      if (a.predicate == inv.key.p.predicate && a.args[inv.key.p.position] == obj) hp = true;
      if (a.predicate == inv.key.q.predicate && a.args[inv.key.q.position] == obj) hq = true;
    }
    const blackout::learn::Combo c = hp ? (hq ? blackout::learn::kTT : blackout::learn::kTF)
                                        : (hq ? blackout::learn::kFT : blackout::learn::kFF);
    if (!blackout::learn::allows(inv.relation(), c)) return false;
  }
  return true;
}

}  // namespace testing
