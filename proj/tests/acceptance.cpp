// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <blackout/evaluation.hpp>
#include <blackout/invariants.hpp>
#include <blackout/learner.hpp>
#include <blackout/pddl.hpp>
#include <blackout/trace.hpp>

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace blackout;
using learn::AllowedSet;
using learn::Relation;
using learn::Slot;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what;
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.expect(false, std::string("exception: ") + e.what());
  }
  std::cout << (o.pass ? "PASS " : "FAIL ") << name;
  if (!o.detail.str().empty()) std::cout << " -- " << o.detail.str();
  std::cout << "\n";
  if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<trace::Trajectory> one(trace::Trajectory t) {
  std::vector<trace::Trajectory> ts;
  ts.push_back(std::move(t));
  return ts;
}

pddl::AtomSet confirmed(const learn::CandidateSet& s) {
  pddl::AtomSet out;
  for (const auto& [l, c] : s)
    if (c) out.insert(l);
  return out;
}

const learn::Invariant* find(const std::vector<learn::Invariant>& invs, const Slot& a, const Slot& b) {
  for (const auto& inv : invs)
    if ((inv.key.p == a && inv.key.q == b) || (inv.key.p == b && inv.key.q == a)) return &inv;
  return nullptr;
}

const std::vector<std::string> kSokobanTraces = {
    "traces/level1-human.trace", "traces/level1-bump.trace", "traces/level1-solution.trace",
    "traces/corridor-blocked.trace", "traces/level3-random.trace"};

void effects_exact(Outcome& o) {
  const auto& d = testing::sokoban();
  auto t0 = std::chrono::steady_clock::now();
  auto ts = one(testing::load_trace("traces/level1-human.trace"));
  learn::LearnResult r = learn::learn(ts, d);
  const double elapsed = seconds_since(t0);
  std::size_t observed = 0;
  for (int stage = 1; stage <= 3; ++stage) {
    for (const auto& a : r.model(stage).actions()) {
      if (!a.observed) continue;
      if (stage == 1) ++observed;
      const auto& truth = *d.find_action(a.name);
      o.expect(a.eff_add == truth.eff_add, "stage " + std::to_string(stage) + " " + a.name + " add effects differ");
      o.expect(a.eff_del == truth.eff_del, "stage " + std::to_string(stage) + " " + a.name + " delete effects differ");
    }
  }
  o.expect(observed == 3, "expected 3 observed actions, got " + std::to_string(observed));
  o.expect(elapsed < 1.0, "took " + fmt(elapsed) + " s");
}

void failure_confirmation(Outcome& o) {
  const auto& d = testing::sokoban();
  auto ts = one(testing::load_trace("traces/corridor-blocked.trace"));
  o.expect(ts[0].size() <= 10 && ts[0].failure_count() == 1, "trace shape");
  learn::LearnResult r = learn::learn(ts, d);
  o.expect(r.records.size() == 1 && r.records[0].confirming, "the single failure should be confirming");

  const auto& move = *r.stage2.find("move");
  const auto clear_to = testing::atom("clear", {"?to"});
  o.expect(move.pre_pos.count(clear_to) && move.pre_pos.at(clear_to), "clear(?to) not confirmed");
  for (const auto* s : {&move.pre_pos, &move.pre_neg})
    for (const auto& [l, c] : *s) o.expect(l.predicate != "is-nongoal", "is-nongoal kept: " + l.to_string());

  auto rep1 = eval::report(r.stage1, d);
  auto rep2 = eval::report(r.stage2, d);
  const double p1 = rep1.find("move")->scores.precision;
  const double p2 = rep2.find("move")->scores.precision;
  o.expect(p2 > p1, "precision stage 1 " + fmt(p1) + ", stage 2 " + fmt(p2));
}

void recall_stability(Outcome& o) {
  struct Source {
    std::string trace;
    std::string domain;
  };
  std::vector<Source> sources;
  for (const auto& t : kSokobanTraces) sources.push_back({t, "sokoban/domain.pddl"});
  sources.push_back({"traces/hanoi.trace", "hanoi/domain.pddl"});
  sources.push_back({"traces/npuzzle.trace", "npuzzle/domain.pddl"});

  for (const auto& src : sources) {
    pddl::Domain d = pddl::parse_domain(testing::read_data(src.domain));
    auto ts = one(testing::load_trace(src.trace, d));
    learn::LearnResult r = learn::learn(ts, d);
    auto r1 = eval::report(r.model(1), d);
    for (int stage = 2; stage <= 3; ++stage) {
      auto rs = eval::report(r.model(stage), d);
      for (std::size_t i = 0; i < r1.rows.size(); ++i) {
        const auto& a = r1.rows[i];
        const auto& b = rs.rows[i];
        o.expect(a.scores.recall == b.scores.recall,
                 src.trace + " " + a.action + " recall " + fmt(a.scores.recall) + " at stage 1, " +
                     fmt(b.scores.recall) + " at stage " + std::to_string(stage));
      }
    }
  }
}

void invariant_lattice(Outcome& o) {
  for (unsigned s = 0; s < 16; ++s)
    o.expect(learn::allowed(learn::classify(static_cast<AllowedSet>(s))) == s,
             "subset " + std::to_string(s) + " does not decode to itself");

  // Fixed naming, indexed by mask (TT=1, TF=2, FT=4, FF=8).
  const char* names[16] = {"⊥", "∧", "⇍", "p", "⇏", "q", "⊕", "∨", "↓", "⊙", "¬q", "⇐", "¬p", "⇒", "↑", "⊤"};
  std::set<std::string> seen;
  for (unsigned s = 0; s < 16; ++s) {
    const std::string sym(learn::symbol(learn::classify(static_cast<AllowedSet>(s))));
    o.expect(sym == names[s], "mask " + std::to_string(s) + " named " + sym);
    seen.insert(sym);
  }
  o.expect(seen.size() == 16, "names are not distinct");

  const auto& d = testing::sokoban();
  const Slot at_loc{"at", 1}, clear{"clear", 0};
  auto ts = one(testing::load_trace("traces/level1-human.trace"));
  learn::LearnResult r = learn::learn(ts, d);
  const auto* eff = find(r.stage3.effect_invariants, at_loc, clear);
  o.expect(eff && eff->relation() == Relation::kXor, "effect invariant for (at@1, clear@0) is not xor");
  const auto* merged = find(r.stage3.invariants, at_loc, clear);
  o.expect(merged && merged->relation() == Relation::kNand, "merged invariant for (at@1, clear@0) is not nand");

  // Every merged invariant holds in every state of every bundled trace.
  for (const auto& file : kSokobanTraces) {
    auto tsf = one(testing::load_trace(file));
    learn::LearnResult rf = learn::learn(tsf, d);
    const auto& t = tsf[0];
    for (const auto& inv : rf.stage3.invariants)
      for (std::size_t i = 0; i <= t.size(); ++i)
        if (!testing::invariant_holds(inv, t.state(i), t.objects(), d)) {
          o.expect(false, file + ": " + inv.to_string() + " broken in state " + std::to_string(i));
          break;
        }
  }
}

void resolution_table(Outcome& o) {
  // Expected action per relation, by mask.
  enum Act { kErr, kP, kQ, kBoth, kNone };
  const Act expected[16] = {kErr, kErr, kErr, kQ, kErr, kP, kBoth, kNone,
                            kErr, kBoth, kP, kNone, kQ, kNone, kNone, kNone};
  const Slot sp{"p", 0}, sq{"q", 0};
  const auto lp = testing::atom("p", {"?x"});
  const auto lq = testing::atom("q", {"?x"});
  for (unsigned s = 0; s < 16; ++s) {
    learn::CandidateModel m;
    m.actions().push_back({"a", {{"?x"}}, {{lp, false}}, {{lq, false}}, {}, {}, true, 1, 1});
    learn::ViolationRecord rec{{"a", {"o"}}, {lp}, {lq}, false, 0, 0};
    std::vector<learn::Invariant> invs{{{sp, sq}, static_cast<AllowedSet>(s)}};
    auto diags = learn::resolve(std::vector<learn::ViolationRecord>{rec}, invs, m);
    const auto& a = *m.find("a");
    const bool got_p = a.pre_pos.at(lp), got_q = a.pre_neg.at(lq);
    Act got = !diags.empty() ? kErr : got_p && got_q ? kBoth : got_p ? kP : got_q ? kQ : kNone;
    if (!diags.empty() && (got_p || got_q)) got = kNone;  // error must not confirm
    o.expect(got == expected[s], std::string("relation ") + std::string(learn::symbol(learn::classify(s))) +
                                     " resolved wrongly");
  }
}

void evaluation_arithmetic(Outcome& o) {
  const auto& truth = testing::sokoban();
  pddl::Domain m2 = pddl::parse_domain(testing::read_data("sokoban/models/move-extra-effects.pddl"));
  auto c = eval::compare_action(*m2.find_action("move"), *truth.find_action("move"));
  o.expect(c.tp == 7 && c.fp == 2 && c.fn == 0, "counts tp=" + std::to_string(c.tp) + " fp=" + std::to_string(c.fp) +
                                                     " fn=" + std::to_string(c.fn));
  const double f = eval::f1(c);
  o.expect(std::abs(f - 0.875) < 1e-12, "F1 " + fmt(f));

  for (const auto& row : eval::report(truth, truth).rows)
    o.expect(row.scores.f1 == 1.0, row.action + " truth-vs-truth F1 " + fmt(row.scores.f1));
}

void performance(Outcome& o) {
  const auto& d = testing::sokoban();
  auto t0 = std::chrono::steady_clock::now();
  auto ts = one(testing::load_trace("traces/level3-random.trace"));
  learn::LearnResult r = learn::learn(ts, d);
  const double elapsed = seconds_since(t0);
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
  o.expect(r.stage3.model.find("move")->observed, "move not observed");
  o.expect(elapsed < 5.0, "took " + fmt(elapsed) + " s");
  o.expect(peak_mb < 200.0, "peak " + fmt(peak_mb) + " MB");
  std::cout << "  level3-random: " << ts[0].size() << " transitions, " << fmt(elapsed) << " s, peak " << fmt(peak_mb)
            << " MB\n";
}

void other_domains(Outcome& o) {
  for (const std::string dir : {"hanoi", "npuzzle"}) {
    pddl::Domain d = pddl::parse_domain(testing::read_data(dir + "/domain.pddl"));
    auto ts = one(testing::load_trace("traces/" + dir + ".trace", d));
    learn::LearnResult r = learn::learn(ts, d);
    for (const auto& a : r.stage3.model.actions()) {
      if (!a.observed) {
        o.expect(false, dir + " " + a.name + " unobserved");
        continue;
      }
      const auto& truth = *d.find_action(a.name);
      o.expect(a.eff_add == truth.eff_add && a.eff_del == truth.eff_del, dir + " " + a.name + " effects differ");
    }
  }
}

}  // namespace

int main() {
  criterion("effects exactness on a level-1 trace", effects_exact);
  criterion("failure confirmation on the blocked corridor", failure_confirmation);
  criterion("recall stability across stages", recall_stability);
  criterion("invariant lattice", invariant_lattice);
  criterion("ambiguity resolution table", resolution_table);
  criterion("evaluation arithmetic", evaluation_arithmetic);
  criterion("performance on a large trace", performance);
  criterion("domain agnosticity", other_domains);
  std::cout << "NOTE published absolute F1 values for the external baseline are not reproduced; "
               "the property checks above stand in for them\n";
  std::cout << failures << " criteria failed\n";
  return failures == 0 ? 0 : 1;
}
