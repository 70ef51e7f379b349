#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "blackout/evaluation.hpp"
#include "blackout/learner.hpp"
#include "blackout/pddl.hpp"
#include "blackout/sokoban.hpp"
#include "blackout/trace.hpp"

namespace blackout::server {

struct LevelEntry {
  std::string id;
  std::string name;
  sokoban::Level level;
  pddl::Problem problem;
};

/// Compiles every `.sok` file in `dir`, sorted by file name. The id is the
/// file stem. Throws on unreadable or malformed levels.
std::vector<LevelEntry> load_levels(const std::string& dir, const pddl::Domain& domain);

struct MoveResult {
  bool ok = false;
  pddl::GroundAction action;
  pddl::State state;
  std::size_t trace_length = 0;
  eval::ProficiencyReport proficiency;
  std::string model_pddl;
};

/// One player's game. Moves take the exclusive lock; reads share it. The
/// learned model is recomputed from the whole trajectory after every move.
class Session {
 public:
  Session(std::string id, const pddl::Domain& domain, const LevelEntry& level);

  const std::string& id() const { return id_; }
  const LevelEntry& level() const { return level_; }

  MoveResult move(sokoban::Direction direction);

  pddl::State state() const;
  std::vector<std::string> grid() const;
  std::size_t trace_length() const;
  std::string trace_text() const;
  std::string model_pddl() const;
  eval::ProficiencyReport proficiency() const;

 private:
  void relearn();

  const std::string id_;
  const pddl::Domain& domain_;
  const LevelEntry& level_;
  mutable std::shared_mutex mutex_;
  trace::Trajectory trajectory_;
  learn::CandidateModel model_;
  eval::ProficiencyReport proficiency_;
};

class SessionManager {
 public:
  SessionManager(pddl::Domain domain, std::vector<LevelEntry> levels);

  const pddl::Domain& domain() const { return domain_; }
  const std::vector<LevelEntry>& levels() const { return levels_; }

  /// Returns nullptr for an unknown level id.
  std::shared_ptr<Session> create(const std::string& level_id);
  std::shared_ptr<Session> find(const std::string& session_id) const;

 private:
  std::string new_id();

  const pddl::Domain domain_;
  const std::vector<LevelEntry> levels_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace blackout::server
