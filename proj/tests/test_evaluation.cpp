#include <doctest.h>

#include <blackout/error.hpp>
#include <blackout/evaluation.hpp>
#include <blackout/learner.hpp>

#include <json.hpp>
#include <random>

#include "support.hpp"

using namespace blackout;
using namespace blackout::eval;
using testing::atom;

namespace {

const pddl::ActionSchema& truth_move() { return *testing::sokoban().find_action("move"); }

pddl::ActionSchema model_move(const char* file) {
  return *pddl::parse_domain(testing::read_data(std::string("sokoban/models/") + file)).find_action("move");
}

}  // namespace

TEST_CASE("identity") {
  for (const auto& a : testing::sokoban().actions) {
    ConfusionCounts c = compare_action(a, a);
    CHECK(c == ConfusionCounts{a.literal_count(), 0, 0});
    Scores s = score(c);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
  ProficiencyReport r = report(testing::sokoban(), testing::sokoban());
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) CHECK(row.scores.f1 == 1.0);
}

TEST_CASE("superfluous effects, renamed variables") {
  ConfusionCounts c = compare_action(model_move("move-extra-effects.pddl"), truth_move());
  CHECK(c == ConfusionCounts{7, 2, 0});
  Scores s = score(c);
  CHECK(s.precision == doctest::Approx(7.0 / 9.0));
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == doctest::Approx(0.875));
}

TEST_CASE("an effect in place of a precondition") {
  // pre+: 2 tp, 1 fp, 1 fn; eff+: 2 tp, 1 fp; eff-: 2 tp.
  ConfusionCounts c = compare_action(model_move("move-wrong-precondition.pddl"), truth_move());
  CHECK(c == ConfusionCounts{6, 2, 1});
  CHECK(f1(c) == doctest::Approx(0.8));
}

TEST_CASE("buckets are independent") {
  pddl::ActionSchema learned = truth_move();
  learned.pre_pos.clear();
  learned.eff_add.insert(atom("move-dir", {"?from", "?to", "?dir"}));
  ConfusionCounts c = compare_action(learned, truth_move());
  CHECK(c == ConfusionCounts{4, 1, 3});
}

TEST_CASE("empty learned action and arity mismatch") {
  pddl::ActionSchema empty{"move", truth_move().params, {}, {}, {}, {}};
  ConfusionCounts c = compare_action(empty, truth_move());
  CHECK(c == ConfusionCounts{0, 0, 7});
  Scores s = score(c);
  CHECK_FALSE(s.precision_defined);
  CHECK(s.precision == 0.0);
  CHECK(s.f1 == 0.0);

  pddl::ActionSchema short_move = truth_move();
  short_move.params.pop_back();
  CHECK_THROWS_AS(compare_action(short_move, truth_move()), ValidationError);
}

TEST_CASE("f1 arithmetic") {
  CHECK(f1(0.5, 0.5) == doctest::Approx(0.5));
  CHECK(f1(0.0, 0.0) == 0.0);
  CHECK(f1(ConfusionCounts{0, 3, 4}) == 0.0);
  CHECK(f1(ConfusionCounts{7, 2, 0}) == doctest::Approx(7.0 / 8.0));
  Scores none = score(ConfusionCounts{0, 0, 0});
  CHECK_FALSE(none.precision_defined);
  CHECK_FALSE(none.recall_defined);
}

TEST_CASE("reports flag unobserved actions") {
  const auto& d = testing::sokoban();
  std::vector<trace::Trajectory> ts{testing::load_trace("traces/corridor-blocked.trace")};
  learn::CandidateModel m = learn::learn(ts, d).model(3);
  ProficiencyReport r = report(m, d);
  REQUIRE(r.rows.size() == 3);
  CHECK_FALSE(r.find("move")->unobserved);
  CHECK(r.find("push-to-goal")->unobserved);
  CHECK(r.find("push-to-nongoal")->unobserved);
  CHECK(r.find("push-to-goal")->counts.fn == 13);
  CHECK(r.find("move")->counts == ConfusionCounts{5, 0, 2});

  const std::string text = format_text(r);
  CHECK(text.find("unobserved") != std::string::npos);
  auto json = nlohmann::json::parse(format_json(r));
  REQUIRE(json.size() == 3);
  CHECK(json[0]["action"] == "move");
  CHECK(json[0]["tp"] == 5);
  CHECK(json[0]["precision"] == 1.0);
  CHECK(json[1]["unobserved"] == true);

  // All three mechanics appear in the full human trace of level 1.
  std::vector<trace::Trajectory> full{testing::load_trace("traces/level1-human.trace")};
  ProficiencyReport all = report(learn::learn(full, d).model(3), d);
  for (const auto& row : all.rows) CHECK_FALSE(row.unobserved);

  pddl::Domain alien = d;
  alien.actions.push_back({"jump", {}, {}, {}, {}, {}});
  CHECK_THROWS_AS(report(alien, d), ValidationError);
}

TEST_CASE("permutation invariance and monotonicity") {
  std::mt19937 rng(5);
  const pddl::ActionSchema& truth = *testing::sokoban().find_action("push-to-goal");
  pddl::AtomSet junk{atom("is-goal", {"?ppos"}), atom("clear", {"?ppos"}), atom("at", {"?s", "?ppos"})};
  for (int round = 0; round < 100; ++round) {
    // Random learned schema: each truth literal kept with p = 1/2, each junk
    // literal added to pre_pos with p = 1/2.
    pddl::ActionSchema learned{truth.name, truth.params, {}, {}, {}, {}};
    auto keep = [&](const pddl::AtomSet& from, pddl::AtomSet& to) {
      for (const auto& l : from)
        if (rng() % 2) to.insert(l);
    };
    keep(truth.pre_pos, learned.pre_pos);
    keep(truth.pre_neg, learned.pre_neg);
    keep(truth.eff_add, learned.eff_add);
    keep(truth.eff_del, learned.eff_del);
    keep(junk, learned.pre_pos);
    const ConfusionCounts base = compare_action(learned, truth);
    CHECK(base.tp + base.fn == truth.literal_count());

    // Renaming parameters consistently changes nothing.
    pddl::ActionSchema renamed = learned;
    std::vector<std::string> fresh;
    for (std::size_t i = 0; i < renamed.params.size(); ++i) fresh.push_back("?v" + std::to_string(rng() % 1000) + "_" + std::to_string(i));
    auto rename = [&](const pddl::AtomSet& s) {
      pddl::AtomSet out;
      for (auto l : s) {
        for (auto& arg : l.args) arg = fresh[*learned.param_index(arg)];
        out.insert(l);
      }
      return out;
    };
    renamed.pre_pos = rename(learned.pre_pos);
    renamed.pre_neg = rename(learned.pre_neg);
    renamed.eff_add = rename(learned.eff_add);
    renamed.eff_del = rename(learned.eff_del);
    for (std::size_t i = 0; i < renamed.params.size(); ++i) renamed.params[i].name = fresh[i];
    CHECK(compare_action(renamed, truth) == base);

    const Scores s0 = score(base);
    pddl::ActionSchema more_right = learned;
    for (const auto& l : truth.eff_add) more_right.eff_add.insert(l);
    CHECK(score(compare_action(more_right, truth)).recall >= s0.recall);
    pddl::ActionSchema more_wrong = learned;
    more_wrong.eff_del.insert(atom("is-goal", {"?to"}));
    const Scores sw = score(compare_action(more_wrong, truth));
    if (s0.precision_defined) CHECK(sw.precision <= s0.precision);
  }
}
