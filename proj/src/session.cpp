#include "blackout/session.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "blackout/error.hpp"
#include "blackout/simulator.hpp"

namespace blackout::server {

namespace fs = std::filesystem;

std::vector<LevelEntry> load_levels(const std::string& dir, const pddl::Domain& domain) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".sok") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<LevelEntry> out;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    LevelEntry e;
    e.id = path.stem().string();
    e.level = sokoban::parse_level(buf.str());
    if (buf.str().find(';') == std::string::npos) e.level.name = e.id;
    e.name = e.level.name;
    e.problem = sokoban::compile_level(e.level, domain.name);
    out.push_back(std::move(e));
  }
  return out;
}

Session::Session(std::string id, const pddl::Domain& domain, const LevelEntry& level)
    : id_(std::move(id)), domain_(domain), level_(level), trajectory_(level.problem.objects, level.problem.init) {
  relearn();
}

void Session::relearn() {
  const trace::Trajectory* t = &trajectory_;
  model_ = learn::learn(std::span(t, 1), domain_).model(3);
  proficiency_ = eval::report(model_, domain_);
}

MoveResult Session::move(sokoban::Direction direction) {
  std::unique_lock lock(mutex_);
  const pddl::State& s = trajectory_.final_state();
  pddl::GroundAction action = sokoban::resolve_intent(s, direction, domain_, level_.problem);
  sim::ExecutionResult r = sim::step(s, action, domain_);
  if (r.ok)
    trajectory_.append_ok(action, std::move(r.next));
  else
    trajectory_.append_failed(action);
  relearn();

  MoveResult out;
  out.ok = r.ok;
  out.action = std::move(action);
  out.state = trajectory_.final_state();
  out.trace_length = trajectory_.size();
  out.proficiency = proficiency_;
  out.model_pddl = pddl::print_domain(model_.to_domain(domain_));
  return out;
}

pddl::State Session::state() const {
  std::shared_lock lock(mutex_);
  return trajectory_.final_state();
}

std::vector<std::string> Session::grid() const {
  std::shared_lock lock(mutex_);
  return sokoban::render_state(level_.problem, domain_, trajectory_.final_state());
}

std::size_t Session::trace_length() const {
  std::shared_lock lock(mutex_);
  return trajectory_.size();
}

std::string Session::trace_text() const {
  std::shared_lock lock(mutex_);
  return trace::write_trace(trajectory_);
}

std::string Session::model_pddl() const {
  std::shared_lock lock(mutex_);
  return pddl::print_domain(model_.to_domain(domain_));
}

eval::ProficiencyReport Session::proficiency() const {
  std::shared_lock lock(mutex_);
  return proficiency_;
}

SessionManager::SessionManager(pddl::Domain domain, std::vector<LevelEntry> levels)
    : domain_(std::move(domain)), levels_(std::move(levels)) {}

std::string SessionManager::new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx%04llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(++counter_ & 0xFFFF));
  return buf;
}

std::shared_ptr<Session> SessionManager::create(const std::string& level_id) {
  auto it = std::find_if(levels_.begin(), levels_.end(), [&](const LevelEntry& l) { return l.id == level_id; });
  if (it == levels_.end()) return nullptr;
  std::lock_guard lock(mutex_);
  auto session = std::make_shared<Session>(new_id(), domain_, *it);
  sessions_.emplace(session->id(), session);
  return session;
}

std::shared_ptr<Session> SessionManager::find(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

}  // namespace blackout::server
