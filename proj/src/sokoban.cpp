#include "blackout/sokoban.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <tuple>
#include <charconv>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "blackout/error.hpp"

namespace blackout::sokoban {

namespace {

std::optional<Cell> cell_from_glyph(char c) {
  switch (c) {
    case '#': return Cell::kWall;
    case ' ':
    case '-':
    case '_': return Cell::kFloor;
    case '.': return Cell::kGoal;
    case '@': return Cell::kPlayer;
    case '+': return Cell::kPlayerOnGoal;
    case '$': return Cell::kStone;
    case '*': return Cell::kStoneOnGoal;
    default: return std::nullopt;
  }
}

char glyph(Cell c) {
  switch (c) {
    case Cell::kWall: return '#';
    case Cell::kFloor: return ' ';
    case Cell::kGoal: return '.';
    case Cell::kPlayer: return '@';
    case Cell::kPlayerOnGoal: return '+';
    case Cell::kStone: return '$';
    case Cell::kStoneOnGoal: return '*';
  }
  return '?';
}

bool is_goal(Cell c) { return c == Cell::kGoal || c == Cell::kPlayerOnGoal || c == Cell::kStoneOnGoal; }
bool has_player(Cell c) { return c == Cell::kPlayer || c == Cell::kPlayerOnGoal; }
bool has_stone(Cell c) { return c == Cell::kStone || c == Cell::kStoneOnGoal; }

std::string numbered(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%02zu", prefix, n);
  return buf;
}

struct Offset {
  long dc;
  long dr;
};

Offset offset(Direction d) {
  switch (d) {
    case Direction::kUp: return {0, -1};
    case Direction::kDown: return {0, 1};
    case Direction::kLeft: return {-1, 0};
    case Direction::kRight: return {1, 0};
  }
  return {0, 0};
}

struct Coord {
  long col;
  long row;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Parses `pos-C-R` (1-based) into a 0-based coordinate.
std::optional<Coord> parse_location(std::string_view name) {
  if (!name.starts_with("pos-")) return std::nullopt;
  name.remove_prefix(4);
  auto dash = name.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  long c = 0, r = 0;
  auto [p1, e1] = std::from_chars(name.data(), name.data() + dash, c);
  auto [p2, e2] = std::from_chars(name.data() + dash + 1, name.data() + name.size(), r);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != name.data() + dash || p2 != name.data() + name.size())
    return std::nullopt;
  return Coord{c - 1, r - 1};
}

/// Grid geometry recovered from a problem's location objects.
struct Geometry {
  std::map<Coord, std::string> by_coord;
  std::map<std::string, Coord, std::less<>> by_name;

  explicit Geometry(const pddl::Problem& p) {
    for (const auto& [name, type] : p.objects.entries()) {
      if (auto c = parse_location(name)) {
        by_coord.emplace(*c, name);
        by_name.emplace(name, *c);
      }
    }
  }

  const std::string* at(Coord c) const {
    auto it = by_coord.find(c);
    return it == by_coord.end() ? nullptr : &it->second;
  }
};

bool is_of_type(const pddl::Domain& d, const pddl::Problem& p, const std::string& obj, std::string_view type) {
  const std::string* t = p.objects.type_of(obj);
  return t && d.types.is_subtype(*t, type);
}

/// Location of the first object of `type` at `loc`, if any.
std::optional<std::string> occupant(const pddl::State& s, const pddl::Domain& d, const pddl::Problem& p,
                                    const std::string& loc, std::string_view type) {
  for (const auto& atom : s)
    if (atom.predicate == "at" && atom.args.size() == 2 && atom.args[1] == loc && is_of_type(d, p, atom.args[0], type))
      return atom.args[0];
  return std::nullopt;
}

bool is_wall(const pddl::State& s, const std::string& loc) {
  for (const auto& atom : s)
    if ((atom.predicate == "clear" && atom.args.size() == 1 && atom.args[0] == loc) ||
        (atom.predicate == "at" && atom.args.size() == 2 && atom.args[1] == loc))
      return false;
  return true;
}

/// Nearest wall location to a (possibly off-grid) cell, by Manhattan distance
/// with row-major tie-breaking.
std::optional<std::string> nearest_wall(const Geometry& g, const pddl::State& s, Coord target) {
  std::optional<std::string> best;
  std::tuple<long, long, long> best_key{std::numeric_limits<long>::max(), 0, 0};
  for (const auto& [coord, name] : g.by_coord) {
    if (!is_wall(s, name)) continue;
    std::tuple<long, long, long> key{std::labs(coord.col - target.col) + std::labs(coord.row - target.row), coord.row,
                                     coord.col};
    if (key < best_key) {
      best_key = key;
      best = name;
    }
  }
  return best;
}

}  // namespace

Level parse_level(std::string_view text, std::string name) {
  Level level;
  level.name = std::move(name);
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == ';') {
      if (level.name.empty()) {
        auto start = line.find_first_not_of("; \t");
        if (start != std::string::npos) level.name = line.substr(start);
      }
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (!lines.empty()) break;  // blank line ends the grid
      continue;
    }
    lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError("level has no grid rows");

  std::size_t width = 0;
  for (const auto& l : lines) width = std::max(width, l.size());
  std::size_t players = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    std::vector<Cell> row(width, Cell::kWall);
    for (std::size_t c = 0; c < lines[r].size(); ++c) {
      auto cell = cell_from_glyph(lines[r][c]);
      if (!cell)
        throw ValidationError("level row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                              ": unknown glyph '" + std::string(1, lines[r][c]) + "'");
      row[c] = *cell;
      if (has_player(*cell)) ++players;
    }
    level.grid.push_back(std::move(row));
  }
  if (players != 1) throw ValidationError("level must contain exactly one player, found " + std::to_string(players));
  if (level.name.empty()) level.name = "level";
  return level;
}

std::vector<std::string> render(const Level& level) {
  std::vector<std::string> rows;
  for (const auto& row : level.grid) {
    std::string line;
    for (Cell c : row) line.push_back(glyph(c));
    rows.push_back(std::move(line));
  }
  return rows;
}

std::string location_name(std::size_t col, std::size_t row) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "pos-%02zu-%02zu", col + 1, row + 1);
  return buf;
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "up") return Direction::kUp;
  if (text == "down") return Direction::kDown;
  if (text == "left") return Direction::kLeft;
  if (text == "right") return Direction::kRight;
  return std::nullopt;
}

std::string direction_object(Direction d) {
  switch (d) {
    case Direction::kUp: return "dir-up";
    case Direction::kDown: return "dir-down";
    case Direction::kLeft: return "dir-left";
    case Direction::kRight: return "dir-right";
  }
  return {};
}

pddl::Problem compile_level(const Level& level, const std::string& domain_name) {
  using pddl::Atom;
  pddl::Problem p;
  p.name = level.name;
  for (char& ch : p.name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '-';
  std::transform(p.name.begin(), p.name.end(), p.name.begin(), [](unsigned char ch) { return std::tolower(ch); });
  p.domain_name = domain_name;

  for (Direction d : {Direction::kDown, Direction::kLeft, Direction::kRight, Direction::kUp})
    p.objects.add(direction_object(d), "direction");
  p.objects.add("player-01", "player");

  std::size_t stones = 0;
  for (const auto& row : level.grid)
    for (Cell c : row)
      if (has_stone(c)) p.objects.add(numbered("stone", ++stones), "stone");
  // Locations column-major, as in the IPC instances.
  for (std::size_t c = 0; c < level.cols(); ++c)
    for (std::size_t r = 0; r < level.rows(); ++r) p.objects.add(location_name(c, r), "location");

  std::size_t stone = 0;
  for (std::size_t r = 0; r < level.rows(); ++r) {
    for (std::size_t c = 0; c < level.cols(); ++c) {
      const Cell cell = level.grid[r][c];
      const std::string loc = location_name(c, r);
      p.init.insert(Atom{is_goal(cell) ? "is-goal" : "is-nongoal", {loc}});
      if (cell == Cell::kWall) continue;
      if (has_player(cell)) {
        p.init.insert(Atom{"at", {"player-01", loc}});
      } else if (has_stone(cell)) {
        const std::string s = numbered("stone", ++stone);
        p.init.insert(Atom{"at", {s, loc}});
        if (cell == Cell::kStoneOnGoal) p.init.insert(Atom{"at-goal", {s}});
      } else {
        p.init.insert(Atom{"clear", {loc}});
      }
      for (Direction d : {Direction::kDown, Direction::kLeft, Direction::kRight, Direction::kUp}) {
        const auto [dc, dr] = offset(d);
        const long nc = static_cast<long>(c) + dc;
        const long nr = static_cast<long>(r) + dr;
        if (nc < 0 || nr < 0 || nc >= static_cast<long>(level.cols()) || nr >= static_cast<long>(level.rows())) continue;
        if (level.grid[static_cast<std::size_t>(nr)][static_cast<std::size_t>(nc)] == Cell::kWall) continue;
        p.init.insert(Atom{"move-dir", {loc, location_name(static_cast<std::size_t>(nc), static_cast<std::size_t>(nr)),
                                        direction_object(d)}});
      }
    }
  }
  for (std::size_t i = 1; i <= stones; ++i) p.goal.push_back({Atom{"at-goal", {numbered("stone", i)}}, true});
  return p;
}

pddl::GroundAction resolve_intent(const pddl::State& state, Direction direction, const pddl::Domain& domain,
                                  const pddl::Problem& problem) {
  const Geometry geo(problem);
  std::optional<std::string> player;
  std::string from;
  for (const auto& atom : state) {
    if (atom.predicate == "at" && atom.args.size() == 2 && is_of_type(domain, problem, atom.args[0], "player")) {
      if (player) throw ValidationError("state has more than one player location");
      player = atom.args[0];
      from = atom.args[1];
    }
  }
  if (!player) throw ValidationError("state has no player location");
  auto here = geo.by_name.find(from);
  if (here == geo.by_name.end()) throw ValidationError("player location '" + from + "' has no grid coordinate");

  const std::string dir = direction_object(direction);
  const auto [dc, dr] = offset(direction);
  const Coord target{here->second.col + dc, here->second.row + dr};
  const auto off_grid = [&](Coord c) {
    auto w = nearest_wall(geo, state, c);
    return w ? *w : from;
  };

  const std::string* to = geo.at(target);
  if (!to) return {"move", {*player, from, off_grid(target), dir}};
  if (auto stone = occupant(state, domain, problem, *to, "stone")) {
    const Coord beyond{target.col + dc, target.row + dr};
    const std::string* next = geo.at(beyond);
    const std::string dest = next ? *next : off_grid(beyond);
    const bool goal = state.count(pddl::Atom{"is-goal", {dest}}) > 0;
    return {goal ? "push-to-goal" : "push-to-nongoal", {*player, *stone, from, *to, dest, dir}};
  }
  return {"move", {*player, from, *to, dir}};
}

std::vector<std::string> render_state(const pddl::Problem& problem, const pddl::Domain& domain,
                                      const pddl::State& state) {
  const Geometry geo(problem);
  long cols = 0, rows = 0;
  for (const auto& [coord, name] : geo.by_coord) {
    cols = std::max(cols, coord.col + 1);
    rows = std::max(rows, coord.row + 1);
  }
  std::vector<std::vector<Cell>> grid(static_cast<std::size_t>(rows),
                                      std::vector<Cell>(static_cast<std::size_t>(cols), Cell::kWall));
  for (const auto& [coord, name] : geo.by_coord) {
    const bool goal = state.count(pddl::Atom{"is-goal", {name}}) > 0;
    Cell cell = Cell::kWall;
    if (state.count(pddl::Atom{"clear", {name}}))
      cell = goal ? Cell::kGoal : Cell::kFloor;
    else if (occupant(state, domain, problem, name, "player"))
      cell = goal ? Cell::kPlayerOnGoal : Cell::kPlayer;
    else if (occupant(state, domain, problem, name, "stone"))
      cell = goal ? Cell::kStoneOnGoal : Cell::kStone;
    grid[static_cast<std::size_t>(coord.row)][static_cast<std::size_t>(coord.col)] = cell;
  }
  return render(Level{problem.name, std::move(grid)});
}

}  // namespace blackout::sokoban
