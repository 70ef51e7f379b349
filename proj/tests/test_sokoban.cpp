#include <doctest.h>

#include <blackout/error.hpp>
#include <blackout/simulator.hpp>
#include <blackout/sokoban.hpp>

#include "support.hpp"

using namespace blackout;
using namespace blackout::sokoban;
using testing::atom;

namespace {

std::size_t count(const pddl::State& s, const std::string& pred) {
  std::size_t n = 0;
  for (const auto& a : s) n += a.predicate == pred;
  return n;
}

}  // namespace

TEST_CASE("level text") {
  Level l = parse_level("; Tiny\n#####\n#@$.#\n###\n\n; trailing\n");
  CHECK(l.name == "Tiny");
  CHECK(l.rows() == 3);
  CHECK(l.cols() == 5);
  CHECK(l.grid[1][1] == Cell::kPlayer);
  CHECK(l.grid[1][2] == Cell::kStone);
  CHECK(l.grid[1][3] == Cell::kGoal);
  CHECK(l.grid[2][4] == Cell::kWall);  // padded
  CHECK(render(l) == std::vector<std::string>{"#####", "#@$.#", "#####"});

  CHECK_THROWS_AS(parse_level("#@@#"), ValidationError);
  CHECK_THROWS_AS(parse_level("#  #"), ValidationError);
  CHECK_THROWS_AS(parse_level("#@x#"), ValidationError);
  CHECK_THROWS_AS(parse_level("; only a comment"), ValidationError);
}

TEST_CASE("compile: 3x3 open floor") {
  pddl::Problem p = compile_level(parse_level("---\n-@-\n---", "open"));
  std::size_t locations = 0;
  for (const auto& [name, type] : p.objects.entries()) locations += type == "location";
  CHECK(locations == 9);
  // 4 corners x 2 + 4 edges x 3 + centre x 4
  CHECK(count(p.init, "move-dir") == 24);
  CHECK(count(p.init, "clear") == 8);
  CHECK(count(p.init, "is-nongoal") == 9);
  CHECK(p.init.count(atom("at", {"player-01", "pos-02-02"})));
  CHECK(p.goal.empty());
}

TEST_CASE("compile: stones, goals and walls") {
  pddl::Problem p = compile_level(parse_level("#####\n#@*$#\n#. ##\n#####"));
  CHECK(p.init.count(atom("at-goal", {"stone-01"})));
  CHECK_FALSE(p.init.count(atom("at-goal", {"stone-02"})));
  CHECK(p.init.count(atom("at", {"stone-01", "pos-03-02"})));
  CHECK(p.init.count(atom("at", {"stone-02", "pos-04-02"})));
  CHECK(p.init.count(atom("is-goal", {"pos-02-03"})));
  CHECK(p.init.count(atom("is-nongoal", {"pos-01-01"})));
  CHECK(p.goal.size() == 2);
  for (const auto& a : p.init) {
    if (a.predicate == "move-dir") {
      // No adjacency into or out of the border.
      for (int k = 0; k < 2; ++k) {
        const auto& loc = a.args[static_cast<std::size_t>(k)];
        CHECK(loc.substr(4, 2) != "01");
        CHECK(loc.substr(4, 2) != "05");
        CHECK(loc.substr(7) != "01");
        CHECK(loc.substr(7) != "04");
      }
    }
    if (a.predicate == "clear" || a.predicate == "at") CHECK(a.args.back() != "pos-05-02");
  }
  CHECK(p.init.count(atom("move-dir", {"pos-02-02", "pos-03-02", "dir-right"})));
  CHECK(p.init.count(atom("move-dir", {"pos-03-03", "pos-02-03", "dir-left"})));
  CHECK(p.init.count(atom("move-dir", {"pos-02-03", "pos-02-02", "dir-up"})));

  // The compiled problem is valid against the domain.
  const auto& d = testing::sokoban();
  for (const auto& a : p.init) CHECK_NOTHROW(pddl::check_atom(d, p.objects, a));
  CHECK(pddl::parse_problem(pddl::print_problem(p, d), d) == p);
}

TEST_CASE("render_state inverts compile") {
  for (const char* lv : {"level1.sok", "level2.sok", "level3.sok"}) {
    Level l = parse_level(testing::read_data(std::string("sokoban/levels/") + lv));
    pddl::Problem p = compile_level(l);
    CHECK(render_state(p, testing::sokoban(), p.init) == render(l));
  }
}

TEST_CASE("resolve_intent") {
  const auto& d = testing::sokoban();
  pddl::Problem p = compile_level(parse_level("######\n#@$.-#\n#--$-#\n######"));

  auto push = resolve_intent(p.init, Direction::kRight, d, p);
  CHECK(push == pddl::GroundAction{"push-to-goal",
                                   {"player-01", "stone-01", "pos-02-02", "pos-03-02", "pos-04-02", "dir-right"}});
  CHECK(sim::step(p.init, push, d).ok);

  auto step = resolve_intent(p.init, Direction::kDown, d, p);
  CHECK(step == testing::move("pos-02-02", "pos-02-03", "dir-down"));
  CHECK(sim::step(p.init, step, d).ok);

  auto bump = resolve_intent(p.init, Direction::kUp, d, p);
  CHECK(bump == testing::move("pos-02-02", "pos-02-01", "dir-up"));
  CHECK_FALSE(sim::step(p.init, bump, d).ok);

  // Stone beyond stone: push-to-nongoal into an occupied cell fails.
  pddl::Problem q = compile_level(parse_level("#####\n#@$$#\n#####"));
  auto blocked = resolve_intent(q.init, Direction::kRight, d, q);
  CHECK(blocked.name == "push-to-nongoal");
  CHECK_FALSE(sim::step(q.init, blocked, d).ok);

  // Off-grid targets land on the nearest wall, or the player's own cell.
  pddl::Problem open = compile_level(parse_level("@-#"));
  CHECK(resolve_intent(open.init, Direction::kLeft, d, open) ==
        testing::move("pos-01-01", "pos-03-01", "dir-left"));
  pddl::Problem bare = compile_level(parse_level("@-"));
  auto off = resolve_intent(bare.init, Direction::kUp, d, bare);
  CHECK(off == testing::move("pos-01-01", "pos-01-01", "dir-up"));
  CHECK_FALSE(sim::step(bare.init, off, d).ok);

  CHECK_THROWS_AS(resolve_intent(pddl::State{}, Direction::kUp, d, p), ValidationError);
}

TEST_CASE("directions") {
  CHECK(parse_direction("left") == Direction::kLeft);
  CHECK_FALSE(parse_direction("north"));
  CHECK(direction_object(Direction::kDown) == "dir-down");
  CHECK(location_name(0, 11) == "pos-01-12");
}
