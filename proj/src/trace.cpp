#include "blackout/trace.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "blackout/error.hpp"
#include "blackout/sexpr.hpp"

namespace blackout::trace {

using pddl::Atom;
using pddl::GroundAction;
using pddl::State;

std::size_t Trajectory::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps_.begin(), steps_.end(), [](const Step& s) { return s.outcome == Outcome::kFailed; }));
}

void Trajectory::append_ok(GroundAction action, State post) {
  steps_.push_back({std::move(action), Outcome::kOk});
  states_.push_back(std::make_shared<const State>(std::move(post)));
}

void Trajectory::append_failed(GroundAction action) {
  steps_.push_back({std::move(action), Outcome::kFailed});
  states_.push_back(states_.back());
}

bool operator==(const Trajectory& a, const Trajectory& b) {
  if (a.objects_ != b.objects_ || a.steps_ != b.steps_ || a.states_.size() != b.states_.size()) return false;
  for (std::size_t i = 0; i < a.states_.size(); ++i)
    if (*a.states_[i] != *b.states_[i]) return false;
  return true;
}

namespace {

State read_state(const SExpr& block, const pddl::Domain* domain, const pddl::ObjectTable& objects) {
  State s;
  for (std::size_t i = 1; i < block.items.size(); ++i) {
    const SExpr& e = block.items[i];
    if (e.has_head("not") || e.has_head("unknown") || e.is_symbol(":partial"))
      throw ValidationError("partial observation marker " + e.to_string() + " not supported; states must be complete");
    if (!e.is_list || e.items.empty() || !e.items.front().is_symbol()) fail_at(e, "expected ground atom");
    Atom atom{e.items.front().symbol, {}};
    for (std::size_t j = 1; j < e.items.size(); ++j) {
      if (e.items[j].is_list) fail_at(e.items[j], "expected object name");
      atom.args.push_back(e.items[j].symbol);
    }
    if (domain) pddl::check_atom(*domain, objects, atom);
    s.insert(std::move(atom));
  }
  return s;
}

struct ActionBlock {
  GroundAction action;
  Outcome outcome = Outcome::kOk;
};

ActionBlock read_action(const SExpr& block) {
  if (block.items.size() < 2 || block.items.size() > 3) fail_at(block, "expected (:action (name args...) [:ok|:failed])");
  const SExpr& call = block.items[1];
  if (!call.is_list || call.items.empty()) fail_at(call, "expected (name args...)");
  ActionBlock out;
  for (const auto& item : call.items) {
    if (item.is_list) fail_at(item, "expected symbol in action");
    if (out.action.name.empty())
      out.action.name = item.symbol;
    else
      out.action.args.push_back(item.symbol);
  }
  if (block.items.size() == 3) {
    const SExpr& tag = block.items[2];
    if (tag.is_symbol(":ok"))
      out.outcome = Outcome::kOk;
    else if (tag.is_symbol(":failed"))
      out.outcome = Outcome::kFailed;
    else
      fail_at(tag, "expected :ok or :failed");
  }
  return out;
}

void write_objects_and_init(std::ostream& os, const Trajectory& t) {
  os << "(trajectory\n  (:objects";
  for (const auto& [name, type] : t.objects().entries()) os << " " << name << " - " << type;
  os << ")\n  (:init " << pddl::to_string(t.initial_state()) << ")\n";
}

Trajectory parse_impl(std::string_view text, const pddl::Domain* domain) {
  const SExpr root = read_sexpr(text);
  if (!root.has_head("trajectory")) fail_at(root, "expected (trajectory ...)");

  pddl::ObjectTable objects;
  std::size_t i = 1;
  if (i < root.items.size() && root.items[i].has_head(":objects")) {
    const auto& items = root.items[i].items;
    std::vector<std::string> pending;
    for (std::size_t j = 1; j < items.size(); ++j) {
      if (items[j].is_list) fail_at(items[j], "expected object name");
      if (items[j].symbol == "-") {
        if (j + 1 >= items.size() || items[j + 1].is_list) fail_at(items[j], "missing type after '-'");
        const std::string& type = items[++j].symbol;
        if (domain && !domain->is_type(type)) throw ValidationError("unknown object type '" + type + "'");
        for (const auto& name : pending) objects.add(name, type);
        pending.clear();
      } else {
        pending.push_back(items[j].symbol);
      }
    }
    for (const auto& name : pending) objects.add(name, std::string(pddl::kRootType));
    ++i;
  }
  if (i >= root.items.size() || !(root.items[i].has_head(":init") || root.items[i].has_head(":state")))
    fail_at(root, "expected (:init ...) after (:objects ...)");

  Trajectory t(objects, read_state(root.items[i], domain, objects));
  ++i;

  // `awaiting_post` is set after an ok action until its (:state ...) arrives.
  bool awaiting_post = false;
  std::optional<GroundAction> pending_action;
  bool last_was_failure = false;
  for (; i < root.items.size(); ++i) {
    const SExpr& block = root.items[i];
    if (block.has_head(":action")) {
      if (awaiting_post) fail_at(block, "action " + pending_action->to_string() + " has no following (:state ...)");
      ActionBlock a = read_action(block);
      if (domain) pddl::check_action(*domain, objects, a.action);
      if (a.outcome == Outcome::kFailed) {
        t.append_failed(std::move(a.action));
        last_was_failure = true;
      } else {
        pending_action = std::move(a.action);
        awaiting_post = true;
        last_was_failure = false;
      }
    } else if (block.has_head(":state")) {
      State s = read_state(block, domain, objects);
      if (awaiting_post) {
        t.append_ok(std::move(*pending_action), std::move(s));
        pending_action.reset();
        awaiting_post = false;
      } else if (last_was_failure) {
        if (s != t.final_state())
          throw ChainError("failed action followed by a state differing from its pre-state", t.size() - 1);
        last_was_failure = false;
      } else if (s != t.final_state()) {
        // A restated pre-state for the next transition.
        throw ChainError("pre-state differs from the preceding post-state", t.size());
      }
    } else if (block.has_head(":observation") || block.is_symbol(":partial")) {
      throw ValidationError("partial observation blocks are not supported");
    } else {
      fail_at(block, "expected (:action ...) or (:state ...)");
    }
  }
  if (awaiting_post) throw ValidationError("trailing action " + pending_action->to_string() + " has no post-state");
  return t;
}

}  // namespace

Trajectory parse_trace(std::string_view text, const pddl::Domain& domain) { return parse_impl(text, &domain); }

Trajectory parse_trace(std::string_view text) { return parse_impl(text, nullptr); }

std::string write_trace(const Trajectory& t) {
  std::ostringstream os;
  write_objects_and_init(os, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto step = t[i];
    os << "  (:action " << step.action.to_string() << (step.ok() ? " :ok" : " :failed") << ")\n";
    if (step.ok()) os << "  (:state " << pddl::to_string(step.post) << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string write_fama(const Trajectory& t) {
  const Trajectory stripped = strip_failures(t);
  std::ostringstream os;
  write_objects_and_init(os, stripped);
  for (std::size_t i = 0; i < stripped.size(); ++i) {
    auto step = stripped[i];
    os << "  (:action " << step.action.to_string() << ")\n";
    os << "  (:state " << pddl::to_string(step.post) << ")\n";
  }
  os << ")\n";
  return os.str();
}

Trajectory strip_failures(const Trajectory& t) {
  Trajectory out(t.objects(), t.initial_state());
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto step = t[i];
    if (step.ok()) out.append_ok(step.action, step.post);
  }
  return out;
}

}  // namespace blackout::trace
