#include "blackout/learner.hpp"

#include <algorithm>
#include <set>

#include "blackout/error.hpp"

namespace blackout::learn {

using pddl::Atom;
using pddl::AtomSet;
using pddl::State;

bool CandidateAction::confirmed(const Atom& literal, bool positive) const {
  const CandidateSet& set = positive ? pre_pos : pre_neg;
  auto it = set.find(literal);
  return it != set.end() && it->second;
}

CandidateModel::CandidateModel(const pddl::Domain& signature) {
  for (const auto& schema : signature.actions) {
    CandidateAction a;
    a.name = schema.name;
    a.params = schema.params;
    actions_.push_back(std::move(a));
  }
}

const CandidateAction* CandidateModel::find(std::string_view name) const {
  auto it = std::find_if(actions_.begin(), actions_.end(), [&](const CandidateAction& a) { return a.name == name; });
  return it == actions_.end() ? nullptr : &*it;
}

CandidateAction* CandidateModel::find(std::string_view name) {
  return const_cast<CandidateAction*>(std::as_const(*this).find(name));
}

pddl::Domain CandidateModel::to_domain(const pddl::Domain& signature) const {
  pddl::Domain d;
  d.name = signature.name;
  d.requirements = signature.requirements;
  d.types = signature.types;
  d.predicates = signature.predicates;
  bool negative = false;
  for (const auto& a : actions_) {
    if (!a.observed) continue;
    pddl::ActionSchema schema;
    schema.name = a.name;
    schema.params = a.params;
    for (const auto& [lit, conf] : a.pre_pos) schema.pre_pos.insert(lit);
    for (const auto& [lit, conf] : a.pre_neg) schema.pre_neg.insert(lit);
    schema.eff_add = a.eff_add;
    schema.eff_del = a.eff_del;
    negative = negative || !schema.pre_neg.empty();
    d.actions.push_back(std::move(schema));
  }
  if (negative && !d.has_requirement("negative-preconditions")) d.requirements.push_back("negative-preconditions");
  return d;
}

namespace {

const pddl::ActionSchema& schema_for(const pddl::Domain& signature, const pddl::GroundAction& action) {
  const pddl::ActionSchema* schema = signature.find_action(action.name);
  if (!schema) throw ValidationError("trajectory action '" + action.name + "' is not declared in the domain");
  if (schema->params.size() != action.args.size())
    throw ValidationError("action " + action.to_string() + " has the wrong number of arguments");
  return *schema;
}

/// Atoms of `s` whose objects all occur in `objs`.
State restrict(const State& s, const std::set<std::string>& objs) {
  State out;
  for (const auto& atom : s)
    if (std::all_of(atom.args.begin(), atom.args.end(), [&](const std::string& o) { return objs.count(o) > 0; }))
      out.insert(atom);
  return out;
}

/// Every well-typed grounding p(ω) with ω drawn from `objs` (repetition allowed).
AtomSet candidate_fluents(const pddl::Domain& signature, const std::vector<std::string>& objs,
                          const pddl::ObjectTable& objects) {
  AtomSet out;
  for (const auto& pred : signature.predicates) {
    std::vector<std::vector<const std::string*>> choices(pred.arity());
    bool empty = false;
    for (std::size_t k = 0; k < pred.arity(); ++k) {
      for (const auto& o : objs)
        if (signature.types.is_subtype(*objects.type_of(o), pred.params[k])) choices[k].push_back(&o);
      empty = empty || choices[k].empty();
    }
    if (empty) continue;
    std::vector<std::size_t> idx(pred.arity(), 0);
    for (;;) {
      Atom atom{pred.name, {}};
      atom.args.reserve(pred.arity());
      for (std::size_t k = 0; k < pred.arity(); ++k) atom.args.push_back(*choices[k][idx[k]]);
      out.insert(std::move(atom));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

template <typename Pred>
void erase_if(CandidateSet& set, Pred pred) {
  for (auto it = set.begin(); it != set.end();) it = pred(*it) ? set.erase(it) : std::next(it);
}

}  // namespace

CandidateModel step1_successful(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature) {
  CandidateModel model(signature);
  for (const auto& t : trajectories) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const trace::Transition step = t[i];
      if (!step.ok()) continue;
      const pddl::ActionSchema& schema = schema_for(signature, step.action);
      std::set<std::string> obj_set;
      std::vector<std::string> objs;
      for (const auto& o : step.action.args) {
        if (!t.objects().contains(o))
          throw ValidationError("transition " + std::to_string(i) + ": object '" + o + "' is not declared");
        if (obj_set.insert(o).second) objs.push_back(o);
      }

      const State pre = restrict(step.pre, obj_set);
      const State post = restrict(step.post, obj_set);
      const AtomSet fluents = candidate_fluents(signature, objs, t.objects());
      AtomSet present, absent, added, deleted;
      for (const auto& f : fluents) (pre.count(f) ? present : absent).insert(f);
      std::set_difference(post.begin(), post.end(), pre.begin(), pre.end(), std::inserter(added, added.end()));
      std::set_difference(pre.begin(), pre.end(), post.begin(), post.end(), std::inserter(deleted, deleted.end()));

      const auto& binding = step.action.args;
      const AtomSet pos = pddl::generalize(present, schema.params, binding);
      const AtomSet neg = pddl::generalize(absent, schema.params, binding);

      CandidateAction& a = *model.find(schema.name);
      if (!a.observed) {
        for (const auto& l : pos) a.pre_pos.emplace(l, false);
        for (const auto& l : neg) a.pre_neg.emplace(l, false);
        a.observed = true;
      } else {
        erase_if(a.pre_pos, [&](const auto& kv) { return !pos.count(kv.first); });
        erase_if(a.pre_neg, [&](const auto& kv) { return !neg.count(kv.first); });
      }
      a.eff_add.merge(pddl::generalize(added, schema.params, binding));
      a.eff_del.merge(pddl::generalize(deleted, schema.params, binding));
      ++a.successes;
    }
  }

  // Every occurrence must agree with the unioned effects.
  for (const auto& t : trajectories) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const trace::Transition step = t[i];
      if (!step.ok()) continue;
      const CandidateAction& a = *model.find(step.action.name);
      pddl::ActionSchema lifted{a.name, a.params, {}, {}, a.eff_add, a.eff_del};
      const pddl::GroundedSchema g = pddl::ground(lifted, step.action.args);
      for (const auto& atom : g.eff_add)
        if (!step.post.count(atom))
          throw ValidationError("determinism violation at transition " + std::to_string(i) + ": " +
                                step.action.to_string() + " did not add " + atom.to_string());
      for (const auto& atom : g.eff_del)
        if (step.post.count(atom) && !g.eff_add.count(atom))
          throw ValidationError("determinism violation at transition " + std::to_string(i) + ": " +
                                step.action.to_string() + " did not delete " + atom.to_string());
    }
  }
  for (const auto& a : model.actions())
    for (const auto& atom : a.eff_add)
      if (a.eff_del.count(atom))
        throw ValidationError("determinism violation: " + a.name + " both adds and deletes " + atom.to_string());
  return model;
}

Step2Result step2_failed(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature,
                         CandidateModel model) {
  Step2Result result;
  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    const auto& t = trajectories[ti];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const trace::Transition step = t[i];
      if (step.ok()) continue;
      const pddl::ActionSchema& schema = schema_for(signature, step.action);
      CandidateAction& a = *model.find(schema.name);
      ++a.failures;

      ViolationRecord rec{step.action, {}, {}, false, ti, i};
      for (const auto& [lit, conf] : a.pre_pos)
        if (!step.pre.count(pddl::substitute(lit, schema, step.action.args))) rec.r_pos.insert(lit);
      for (const auto& [lit, conf] : a.pre_neg)
        if (step.pre.count(pddl::substitute(lit, schema, step.action.args))) rec.r_neg.insert(lit);

      if (rec.r_pos.size() == 1 && rec.r_neg.empty()) {
        a.pre_pos[*rec.r_pos.begin()] = true;
        rec.confirming = true;
      } else if (rec.r_pos.empty() && rec.r_neg.size() == 1) {
        a.pre_neg[*rec.r_neg.begin()] = true;
        rec.confirming = true;
      }
      result.records.push_back(std::move(rec));
    }
  }
  for (auto& a : model.actions()) {
    if (a.failures == 0) continue;
    erase_if(a.pre_pos, [](const auto& kv) { return !kv.second; });
    erase_if(a.pre_neg, [](const auto& kv) { return !kv.second; });
  }
  result.model = std::move(model);
  return result;
}

std::vector<PrimitiveRule> extract_effect_rules(const CandidateModel& model) {
  std::set<PrimitiveRule> rules;
  for (const auto& a : model.actions()) {
    if (!a.observed) continue;
    std::vector<std::pair<const Atom*, bool>> effects;
    for (const auto& l : a.eff_add) effects.emplace_back(&l, true);
    for (const auto& l : a.eff_del) effects.emplace_back(&l, false);
    for (const auto& [p1, added1] : effects) {
      for (const auto& [p2, added2] : effects) {
        if (p1 == p2) continue;
        for (std::size_t i = 0; i < p1->args.size(); ++i) {
          for (std::size_t j = 0; j < p2->args.size(); ++j) {
            if (p1->args[i] != p2->args[j] || !pddl::is_variable(p1->args[i])) continue;
            Slot p{p1->predicate, i};
            Slot q{p2->predicate, j};
            if (p == q) continue;
            rules.insert(PrimitiveRule{std::move(p), std::move(q), added1, added2, p1->args[i]});
          }
        }
      }
    }
  }
  return {rules.begin(), rules.end()};
}

namespace {

bool in_effects(const CandidateAction& a, const std::string& predicate) {
  auto has = [&](const AtomSet& s) {
    return std::any_of(s.begin(), s.end(), [&](const Atom& l) { return l.predicate == predicate; });
  };
  return has(a.eff_add) || has(a.eff_del);
}

bool is_dynamic(const CandidateModel& model, const std::string& predicate) {
  return std::any_of(model.actions().begin(), model.actions().end(),
                     [&](const CandidateAction& a) { return a.observed && in_effects(a, predicate); });
}

}  // namespace

std::vector<PrimitiveRule> filter_rules(std::vector<PrimitiveRule> rules, const CandidateModel& model) {
  std::erase_if(rules, [&](const PrimitiveRule& r) {
    return std::any_of(model.actions().begin(), model.actions().end(), [&](const CandidateAction& a) {
      return a.observed && in_effects(a, r.q.predicate) && !in_effects(a, r.p.predicate);
    });
  });
  return rules;
}

std::vector<Invariant> merge_rules(std::span<const PrimitiveRule> rules) {
  std::map<InvariantKey, std::vector<const PrimitiveRule*>> groups;
  for (const auto& r : rules) {
    InvariantKey key = r.p < r.q ? InvariantKey{r.p, r.q} : InvariantKey{r.q, r.p};
    groups[std::move(key)].push_back(&r);
  }
  std::vector<Invariant> out;
  for (const auto& [key, group] : groups) {
    if (group.size() != 4) continue;
    const bool opposite = std::all_of(group.begin(), group.end(), [](auto* r) { return r->p_added != r->q_added; });
    const bool same = std::all_of(group.begin(), group.end(), [](auto* r) { return r->p_added == r->q_added; });
    if (opposite) out.push_back({key, allowed(Relation::kXor)});
    if (same) out.push_back({key, allowed(Relation::kXnor)});
  }
  return out;
}

std::vector<Invariant> init_invariants(std::span<const trace::Trajectory> trajectories,
                                       const pddl::Domain& signature) {
  std::map<InvariantKey, AllowedSet> merged;
  for (const auto& t : trajectories) {
    // Objects attached to each slot in s0.
    std::map<Slot, std::set<std::string>> attached;
    for (const auto& atom : t.initial_state())
      for (std::size_t i = 0; i < atom.args.size(); ++i) attached[Slot{atom.predicate, i}].insert(atom.args[i]);

    const auto& preds = signature.predicates;
    for (std::size_t a = 0; a < preds.size(); ++a) {
      for (std::size_t b = a + 1; b < preds.size(); ++b) {
        for (std::size_t i = 0; i < preds[a].arity(); ++i) {
          for (std::size_t j = 0; j < preds[b].arity(); ++j) {
            const Slot p{preds[a].name, i};
            const Slot q{preds[b].name, j};
            const auto& on_p = attached[p];
            const auto& on_q = attached[q];
            AllowedSet seen = 0;
            bool any = false;
            for (const auto& [obj, type] : t.objects().entries()) {
              if (!signature.types.is_subtype(type, preds[a].params[i]) ||
                  !signature.types.is_subtype(type, preds[b].params[j]))
                continue;
              any = true;
              const bool hp = on_p.count(obj) > 0;
              const bool hq = on_q.count(obj) > 0;
              seen |= hp ? (hq ? kTT : kTF) : (hq ? kFT : kFF);
            }
            if (!any) continue;
            Invariant inv = make_invariant(p, q, seen);
            merged[inv.key] |= inv.allowed;
          }
        }
      }
    }
  }
  std::vector<Invariant> out;
  for (const auto& [key, set] : merged) out.push_back({key, set});
  return out;
}

std::vector<Invariant> merge_invariants(std::span<const Invariant> from_effects, std::span<const Invariant> from_init,
                                        const CandidateModel& model) {
  std::map<InvariantKey, AllowedSet> effects;
  for (const auto& inv : from_effects) effects[inv.key] |= inv.allowed;
  std::map<InvariantKey, AllowedSet> out = effects;
  for (const auto& inv : from_init) {
    if (auto it = effects.find(inv.key); it != effects.end()) {
      out[inv.key] |= inv.allowed;
    } else if (!is_dynamic(model, inv.key.p.predicate) && !is_dynamic(model, inv.key.q.predicate)) {
      out[inv.key] |= inv.allowed;
    }
  }
  std::vector<Invariant> result;
  for (const auto& [key, set] : out) result.push_back({key, set});
  return result;
}

std::vector<std::string> resolve(std::span<const ViolationRecord> records, std::span<const Invariant> invariants,
                                 CandidateModel& model) {
  std::vector<std::string> diagnostics;
  for (const auto& rec : records) {
    if (rec.confirming) continue;
    CandidateAction* a = model.find(rec.action.name);
    if (!a) continue;
    std::vector<std::pair<const Atom*, bool>> blamed;
    for (const auto& l : rec.r_pos) blamed.emplace_back(&l, true);
    for (const auto& l : rec.r_neg) blamed.emplace_back(&l, false);

    auto confirm = [&](const Atom& lit, bool positive) { (positive ? a->pre_pos : a->pre_neg)[lit] = true; };

    for (const auto& inv : invariants) {
      for (const auto& [lp, pos_p] : blamed) {
        if (lp->predicate != inv.key.p.predicate || lp->args.size() <= inv.key.p.position) continue;
        for (const auto& [lq, pos_q] : blamed) {
          if (lq == lp || lq->predicate != inv.key.q.predicate || lq->args.size() <= inv.key.q.position) continue;
          if (lp->args[inv.key.p.position] != lq->args[inv.key.q.position]) continue;
          switch (resolution(inv.relation())) {
            case Resolution::kError:
              diagnostics.push_back("transition " + std::to_string(rec.index) + " " + rec.action.to_string() +
                                    ": invariant " + inv.to_string() + " contradicts failure candidates " +
                                    lp->to_string() + ", " + lq->to_string());
              break;
            case Resolution::kConfirmP: confirm(*lp, pos_p); break;
            case Resolution::kConfirmQ: confirm(*lq, pos_q); break;
            case Resolution::kConfirmBoth:
              confirm(*lp, pos_p);
              confirm(*lq, pos_q);
              break;
            case Resolution::kNone: break;
          }
        }
      }
    }
  }
  return diagnostics;
}

Step3Result step3_invariants(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature,
                             CandidateModel model, std::span<const ViolationRecord> records) {
  Step3Result r;
  r.rules = filter_rules(extract_effect_rules(model), model);
  r.effect_invariants = merge_rules(r.rules);
  r.init_invariants = init_invariants(trajectories, signature);
  r.invariants = merge_invariants(r.effect_invariants, r.init_invariants, model);
  r.diagnostics = resolve(records, r.invariants, model);
  r.model = std::move(model);
  return r;
}

const CandidateModel& LearnResult::model(int stage) const {
  switch (stage) {
    case 1: return stage1;
    case 2: return stage2;
    case 3: return stage3.model;
    default: throw Error("stage must be 1, 2 or 3");
  }
}

LearnResult learn(std::span<const trace::Trajectory> trajectories, const pddl::Domain& signature) {
  LearnResult r;
  r.stage1 = step1_successful(trajectories, signature);
  Step2Result s2 = step2_failed(trajectories, signature, r.stage1);
  r.stage2 = s2.model;
  r.records = std::move(s2.records);
  r.stage3 = step3_invariants(trajectories, signature, std::move(s2.model), r.records);
  return r;
}

}  // namespace blackout::learn
