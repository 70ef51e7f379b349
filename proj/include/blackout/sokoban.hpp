#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blackout/pddl.hpp"

namespace blackout::sokoban {

enum class Cell { kWall, kFloor, kGoal, kPlayer, kPlayerOnGoal, kStone, kStoneOnGoal };

/// A rectangular Sokoban grid. Rows shorter than the widest row are padded
/// with walls.
struct Level {
  std::string name;
  std::vector<std::vector<Cell>> grid;

  std::size_t rows() const { return grid.size(); }
  std::size_t cols() const { return grid.empty() ? 0 : grid.front().size(); }
  friend bool operator==(const Level&, const Level&) = default;
};

/// Standard text format: `#` wall, ` ` floor, `.` goal, `@` player,
/// `+` player on goal, `$` stone, `*` stone on goal. Lines starting with `;`
/// are comments; the first comment becomes the level name.
/// Throws ValidationError for an unknown glyph, a missing or duplicate player,
/// or an empty grid.
Level parse_level(std::string_view text, std::string name = {});
std::vector<std::string> render(const Level& level);

/// IPC-style location name for the 0-based cell (col, row): `pos-CC-RR`, 1-based.
std::string location_name(std::size_t col, std::size_t row);

/// Encodes the level as a sokoban-sequential problem. Every cell, walls
/// included, becomes a location; walls carry neither `at` nor `clear`.
pddl::Problem compile_level(const Level& level, const std::string& domain_name = "sokoban-sequential");

enum class Direction { kUp, kDown, kLeft, kRight };

std::optional<Direction> parse_direction(std::string_view text);
std::string direction_object(Direction d);

/// Maps a keypress to the ground action the game would attempt: a push when
/// the neighbouring cell holds a stone (to-goal or to-nongoal by the cell
/// beyond), otherwise a move. The action may fail when executed. Off-grid
/// targets become a move onto the nearest wall location.
pddl::GroundAction resolve_intent(const pddl::State& state, Direction direction, const pddl::Domain& domain,
                                  const pddl::Problem& problem);

/// Rebuilds the text grid for `state` from the problem's location names.
std::vector<std::string> render_state(const pddl::Problem& problem, const pddl::Domain& domain,
                                      const pddl::State& state);

}  // namespace blackout::sokoban
