#include "aia/interrogation.hpp"

#include <algorithm>

namespace aia {

namespace {

constexpr std::pair<Mode, Mode> kPairs[] = {
    {Mode::positive, Mode::negative}, {Mode::positive, Mode::none}, {Mode::negative, Mode::none}};

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Forwards to the real oracle, counting fresh queries and their wall time.
class CountingOracle final : public QueryOracle {
 public:
  CountingOracle(QueryOracle& inner, std::size_t& counter, std::vector<double>& seconds)
      : inner_(inner), counter_(counter), seconds_(seconds) {}

  Answer ask(const PlanOutcomeQuery& query, QueryKind kind) override {
    auto start = std::chrono::steady_clock::now();
    Answer answer = inner_.ask(query, kind);
    if (answer.fresh) {
      ++counter_;
      seconds_.push_back(since(start));
    }
    return answer;
  }
  std::size_t distinct_queries() const override { return inner_.distinct_queries(); }

 private:
  QueryOracle& inner_;
  std::size_t& counter_;
  std::vector<double>& seconds_;
};

// Value of `atom` after the step for each retained effect mode, or nullopt
// when the alternatives disagree.
std::optional<bool> effect_value(const std::vector<Mode>& modes, bool before) {
  std::optional<bool> value;
  for (Mode m : modes) {
    bool v = m == Mode::positive ? true : m == Mode::negative ? false : before;
    if (value && *value != v) return std::nullopt;
    value = v;
  }
  return value;
}

}  // namespace

bool consistent(const TwinModel& twin, const PlanOutcomeQuery& query, const QueryResponse& agent,
                const QueryResponse& predicted, const ModelSet* alternatives) {
  const std::size_t len = query.plan.size();
  if (agent.prefix_length != len || predicted.prefix_length != len) return false;

  const Vocabulary& vocab = twin.model.vocabulary();
  State state = query.initial;
  std::set<GroundAtom> undetermined;
  for (const ActionCall& call : query.plan) {
    const ActionHeader* header = vocab.find_action(call.action);
    State next = apply_effects(twin.ground(call), state);
    for (const LiftedAtom& lifted : instantiate_predicates(vocab, *header)) {
      PalTuple pal{call.action, Location::eff, lifted};
      GroundAtom atom = ground_atom(lifted, call.args);
      if (!twin.model.contains_variant(pal)) {
        undetermined.insert(atom);
        continue;
      }
      std::vector<Mode> modes{*twin.model.mode_of(pal)};
      if (alternatives && !(pal == twin.pal)) {
        auto it = alternatives->alternatives().find(pal);
        if (it != alternatives->alternatives().end()) modes = it->second;
      }
      bool was_undetermined = undetermined.count(atom) != 0;
      bool all_none = std::all_of(modes.begin(), modes.end(), [](Mode m) { return m == Mode::none; });
      if (all_none) continue;
      bool has_none = std::find(modes.begin(), modes.end(), Mode::none) != modes.end();
      std::optional<bool> value = effect_value(modes, state.count(atom) != 0);
      if (!value || (has_none && was_undetermined))
        undetermined.insert(atom);
      else
        undetermined.erase(atom);
    }
    state = std::move(next);
  }

  const GroundAtom guard = guard_atom();
  auto visible = [&](const GroundAtom& atom) { return !(atom == guard) && !undetermined.count(atom); };
  for (const GroundAtom& atom : predicted.final_state)
    if (visible(atom) && !agent.final_state.count(atom)) return false;
  for (const GroundAtom& atom : agent.final_state)
    if (visible(atom) && !predicted.final_state.count(atom)) return false;
  return true;
}

FilterOutcome filter_models(const PlanOutcomeQuery& query, const QueryResponse& agent, const TwinModel& twin_i,
                            const TwinModel& twin_j, const ModelSet* alternatives) {
  FilterOutcome out;
  out.response_i = simulate(twin_i, query.initial, query.plan);
  out.response_j = simulate(twin_j, query.initial, query.plan);
  if (agent.prefix_length < query.plan.size()) {
    out.repair = true;
    return out;
  }
  out.consistent_i = consistent(twin_i, query, agent, out.response_i, alternatives);
  out.consistent_j = consistent(twin_j, query, agent, out.response_j, alternatives);
  if (!out.consistent_i) out.pruned.push_back(twin_i.mode);
  if (!out.consistent_j) out.pruned.push_back(twin_j.mode);
  return out;
}

FailureContext failure_context(const PlanOutcomeQuery& query, const QueryResponse& response) {
  if (response.prefix_length >= query.plan.size()) throw Error("the agent executed the whole plan");
  return FailureContext{query.plan[response.prefix_length], response.final_state, query, response.prefix_length};
}

RepairResult update_pal_ordering(const FailureContext& context, const std::vector<State>& states,
                                 QueryOracle& oracle, const ProblemInstance& instance, const Vocabulary& vocabulary,
                                 const RepairKnowledge& knowledge) {
  const ActionHeader* header = vocabulary.find_action(context.failed.action);
  if (!header) throw MalformedQuery("unknown action '" + context.failed.action + "'");

  // Executability of a call depends only on the values of the action's
  // instantiated predicates under that call's grounding, so any call of the
  // same action can stand in for the failed one.
  const std::vector<LiftedAtom> relevant = instantiate_predicates(vocabulary, *header);
  std::vector<PalTuple> pals;
  std::vector<std::optional<Mode>> known;
  for (const LiftedAtom& lifted : relevant) {
    PalTuple pal{header->name, Location::pre, lifted};
    std::optional<Mode> mode;
    if (knowledge.models) mode = knowledge.models->definite_mode(pal);
    if (!mode && knowledge.excluded) {
      auto it = knowledge.excluded->find(pal);
      if (it != knowledge.excluded->end() && it->second.count(Mode::positive) && it->second.count(Mode::negative))
        mode = Mode::none;
    }
    pals.push_back(std::move(pal));
    known.push_back(mode);
  }

  using Projection = std::vector<bool>;
  auto project = [&](const State& s, const std::vector<std::string>& args) {
    Projection out;
    for (const LiftedAtom& lifted : relevant) out.push_back(s.count(ground_atom(lifted, args)) != 0);
    return out;
  };
  auto violates_known = [&](const Projection& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
      if ((known[k] == Mode::positive && !p[k]) || (known[k] == Mode::negative && p[k])) return true;
    return false;
  };

  const Projection target = project(context.before, context.failed.args);
  std::map<Projection, bool> observed;
  if (knowledge.observations)
    for (const Observation& o : *knowledge.observations)
      if (o.call.action == header->name) observed.emplace(project(o.state, o.call.args), o.executed);
  observed[target] = false;

  std::vector<ActionCall> calls{context.failed};
  for (const ActionCall& call : ground_calls(vocabulary, instance))
    if (call.action == header->name && !(call == context.failed)) calls.push_back(call);

  struct Candidate {
    State state;
    ActionCall call;
    Projection projection;
    bool free = false;  // outcome already observed
    bool superset = false;
    std::size_t distance = 0;
    std::size_t order = 0;
  };
  std::vector<Candidate> candidates;
  std::set<Projection> seen{target};
  auto distance = [&](const Projection& p) {
    std::size_t d = 0;
    for (std::size_t k = 0; k < p.size(); ++k) d += p[k] != target[k];
    return d;
  };
  auto superset = [&](const Projection& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
      if (target[k] && !p[k]) return false;
    return true;
  };
  if (knowledge.observations) {
    for (const Observation& o : *knowledge.observations) {
      if (!o.executed || o.call.action != header->name) continue;
      Projection p = project(o.state, o.call.args);
      if (!seen.insert(p).second) continue;
      candidates.push_back(Candidate{o.state, o.call, p, true, superset(p), distance(p), candidates.size()});
    }
  }
  for (const ActionCall& call : calls) {
    for (const State& s : states) {
      Projection p = project(s, call.args);
      if (!seen.insert(p).second || violates_known(p)) continue;
      auto hit = observed.find(p);
      if (hit != observed.end() && !hit->second) continue;
      candidates.push_back(Candidate{s, call, p, hit != observed.end(), superset(p), distance(p), candidates.size()});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.free != b.free) return a.free;
    if (a.superset != b.superset) return a.superset;
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.order < b.order;
  });

  RepairResult result;
  auto executes = [&](const State& s, const ActionCall& call) {
    Answer answer = oracle.ask(PlanOutcomeQuery{s, Plan{call}}, QueryKind::repair);
    if (answer.fresh) ++result.probes;
    return answer.response.prefix_length == 1;
  };
  auto exclude_from = [&](const Projection& p) {
    for (std::size_t k = 0; k < pals.size(); ++k) result.excluded[pals[k]].insert(p[k] ? Mode::negative : Mode::positive);
  };

  // Preconditions are usually positive, so a candidate whose true atoms are
  // a subset of those of a failed situation is tried last.
  std::vector<Projection> failures{target};
  auto dominated = [&](const Projection& p) {
    for (const Projection& f : failures) {
      bool subset = true;
      for (std::size_t k = 0; k < p.size() && subset; ++k) subset = !p[k] || f[k];
      if (subset) return true;
    }
    return false;
  };
  const Candidate* ok = nullptr;
  std::vector<bool> tried(candidates.size(), false);
  for (std::size_t round = 0; round < candidates.size() && !ok; ++round) {
    std::size_t pick = candidates.size();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (tried[k]) continue;
      if (pick == candidates.size()) pick = k;
      if (candidates[k].free || !dominated(candidates[k].projection)) {
        pick = k;
        break;
      }
    }
    tried[pick] = true;
    const Candidate& candidate = candidates[pick];
    if (candidate.free || executes(candidate.state, candidate.call))
      ok = &candidate;
    else
      failures.push_back(candidate.projection);
  }
  if (!ok)
    throw RepairFailure("no state in the pool lets the agent execute " + header->name +
                        " in a situation like the failed " + to_string(context.failed) +
                        "; a larger state pool is needed");
  result.executable = ok->state;
  Projection current = ok->projection;
  exclude_from(current);

  State state = ok->state;
  for (std::size_t k = 0; k < relevant.size(); ++k) {
    if (current[k] == target[k]) continue;
    GroundAtom atom = ground_atom(relevant[k], ok->call.args);
    State flipped = state;
    if (target[k])
      flipped.insert(atom);
    else
      flipped.erase(atom);
    bool runs;
    if (known[k]) {
      runs = *known[k] == Mode::none;
    } else {
      runs = executes(flipped, ok->call);
      result.resolved[pals[k]] = runs ? Mode::none : target[k] ? Mode::negative : Mode::positive;
    }
    if (runs) {
      current[k] = target[k];
      exclude_from(current);
      state = std::move(flipped);
    }
  }
  if (current == target)
    throw AgentInconsistency("the agent executes " + header->name + " in a situation equivalent to the failed " +
                             to_string(context.failed));
  for (const auto& [pal, mode] : result.resolved) result.excluded.erase(pal);
  return result;
}

Interrogator::Interrogator(QueryOracle& oracle, std::shared_ptr<const Vocabulary> vocabulary, ProblemInstance instance,
                           std::vector<State> states, RunConfig config)
    : Interrogator(oracle, vocabulary, std::move(instance), std::move(states), std::move(config),
                   InterrogationState{PalOrdering::default_for(*vocabulary), ModelSet(vocabulary), {}, {}, 0, 0, 0, 0,
                                      false}) {}

Interrogator::Interrogator(QueryOracle& oracle, std::shared_ptr<const Vocabulary> vocabulary, ProblemInstance instance,
                           std::vector<State> states, RunConfig config, InterrogationState resume)
    : oracle_(oracle),
      vocabulary_(std::move(vocabulary)),
      instance_(std::move(instance)),
      states_(std::move(states)),
      config_(std::move(config)),
      state_(std::move(resume)) {
  if (states_.empty()) throw Error("the state pool is empty");
  if (config_.truth) require_same_vocabulary(config_.truth->vocabulary(), *vocabulary_);
  report_.instantiated_predicates = count_instantiated_predicates(*vocabulary_);
  report_.actions = vocabulary_->actions.size();
  report_.pal_tuples = all_pal_tuples(*vocabulary_).size();
}

void Interrogator::run() {
  while (step()) {
  }
}

bool Interrogator::step() {
  if (!state_.ordering.empty()) {
    PalTuple pal = state_.ordering.front();
    process(pal, false);
    return true;
  }
  if (config_.consolidate && !state_.consolidated) {
    if (!consolidation_round()) state_.consolidated = true;
    return true;
  }
  return false;
}

bool Interrogator::consolidation_round() {
  bool changed = false;
  std::vector<PalTuple> ambiguous;
  for (const auto& [pal, modes] : state_.models.alternatives())
    if (modes.size() > 1) ambiguous.push_back(pal);
  for (const PalTuple& pal : ambiguous) {
    auto before = state_.models.alternatives();
    process(pal, true);
    if (state_.models.alternatives() != before) changed = true;
  }
  return changed;
}

Answer Interrogator::ask(const PlanOutcomeQuery& query, QueryKind kind, double& seconds) {
  auto start = std::chrono::steady_clock::now();
  Answer answer = oracle_.ask(query, kind);
  seconds = since(start);
  if (answer.fresh) {
    ++state_.lattice_queries;
    report_.query_seconds.push_back(seconds);
  }
  return answer;
}

bool Interrogator::apply_repair(const RepairResult& repair, const PalTuple& current, std::set<Mode>& alive,
                                IterationRecord& record) {
  bool progress = false;
  auto violation = [&](const PalTuple& pal, const std::set<Mode>& allowed) {
    if (!config_.truth) return;
    if (!allowed.count(config_.truth->mode_of(pal).value_or(Mode::none))) ++report_.safety_violations;
  };

  for (const auto& [pal, mode] : repair.resolved) {
    record.repaired.push_back(PalmTuple{pal, mode});
    violation(pal, {mode});
    if (pal == current) {
      if (!alive.count(mode)) throw AgentInconsistency("repair contradicts pruning of " + to_string(pal, *vocabulary_));
      if (alive.size() > 1) progress = true;
      alive = {mode};
    } else if (state_.models.in_footprint(pal)) {
      auto before = state_.models.alternatives().at(pal);
      if (!state_.models.restrict(pal, {mode}))
        throw AgentInconsistency("repair contradicts the resolved mode of " + to_string(pal, *vocabulary_));
      if (state_.models.alternatives().at(pal) != before) progress = true;
    } else if (state_.ordering.remove(pal)) {
      auto& excluded = state_.excluded[pal];
      if (excluded.count(mode)) throw AgentInconsistency("repair contradicts an excluded mode");
      state_.models.refine(pal, {mode});
      progress = true;
    }
  }
  for (const auto& [pal, modes] : repair.excluded) {
    std::set<Mode> allowed;
    for (Mode m : kAllModes)
      if (!modes.count(m)) allowed.insert(m);
    violation(pal, allowed);
    if (pal == current) {
      for (Mode m : modes)
        if (alive.erase(m)) progress = true;
      if (alive.empty()) throw AgentInconsistency("repair excludes every mode of " + to_string(pal, *vocabulary_));
    } else if (state_.models.in_footprint(pal)) {
      auto before = state_.models.alternatives().at(pal);
      if (!state_.models.restrict(pal, std::vector<Mode>(allowed.begin(), allowed.end())))
        throw AgentInconsistency("repair excludes every mode of " + to_string(pal, *vocabulary_));
      if (state_.models.alternatives().at(pal) != before) progress = true;
    } else {
      state_.excluded[pal].insert(modes.begin(), modes.end());
    }
  }
  state_.resolved = state_.models.footprint_size();
  return progress;
}

void Interrogator::process(const PalTuple& pal, bool consolidation) {
  auto started = std::chrono::steady_clock::now();
  IterationRecord record;
  record.index = ++state_.iterations;
  record.pal = pal;
  record.consolidation = consolidation;

  std::set<Mode> alive;
  if (consolidation) {
    const auto& modes = state_.models.alternatives().at(pal);
    alive.insert(modes.begin(), modes.end());
  } else {
    const auto it = state_.excluded.find(pal);
    for (Mode m : kAllModes)
      if (it == state_.excluded.end() || !it->second.count(m)) alive.insert(m);
  }

  CountingOracle probes(oracle_, state_.repair_queries, report_.query_seconds);
  bool restart = alive.size() > 1;
  while (restart) {
    restart = false;
    for (const auto& [mode_i, mode_j] : kPairs) {
      if (!alive.count(mode_i) || !alive.count(mode_j)) continue;
      Model base = state_.models.representative();
      if (consolidation) base.erase(pal);
      GeneratedQuery generated = generate_query(base, pal, mode_i, mode_j, states_, instance_, config_.limits);
      PairRecord& pair = record.pairs.emplace_back();
      pair.mode_i = mode_i;
      pair.mode_j = mode_j;
      pair.states_tried = generated.states_tried;
      if (!generated.query) continue;
      const PlanOutcomeQuery& query = *generated.query;
      Answer answer = ask(query, QueryKind::lattice, pair.seconds);
      observe(query, answer.response);
      pair.query = query;
      pair.agent = answer.response;
      pair.fresh = answer.fresh;
      pair.filter = filter_models(query, answer.response, generated.twin_i, generated.twin_j, &state_.models);
      const bool repair = pair.filter.repair;
      for (Mode m : pair.filter.pruned) {
        if (config_.truth && config_.truth->mode_of(pal).value_or(Mode::none) == m) ++report_.safety_violations;
        alive.erase(m);
        state_.pruned.insert(PalmTuple{pal, m});
      }
      if (repair) {
        RepairResult result = update_pal_ordering(failure_context(query, answer.response), states_, probes, instance_,
                                                  *vocabulary_,
                                                  RepairKnowledge{&state_.models, &state_.excluded, &observations_});
        record.repair_probes += result.probes;
        if (apply_repair(result, pal, alive, record)) {
          restart = alive.size() > 1;
        } else {
          record.stalled = true;
        }
        break;
      }
    }
  }
  if (alive.empty()) throw AgentInconsistency("every mode of " + to_string(pal, *vocabulary_) + " was pruned");

  std::vector<Mode> retained(alive.begin(), alive.end());
  if (consolidation) {
    state_.models.restrict(pal, retained);
  } else {
    state_.models.refine(pal, retained);
    state_.ordering.remove(pal);
  }
  record.retained = std::move(retained);
  finish(record, started);
}

void Interrogator::observe(const PlanOutcomeQuery& query, const QueryResponse& response) {
  if (query.plan.empty()) return;
  observations_.push_back(Observation{query.initial, query.plan.front(), response.prefix_length > 0});
  if (response.prefix_length > 0 && response.prefix_length < query.plan.size())
    observations_.push_back(Observation{response.final_state, query.plan[response.prefix_length], false});
}

void Interrogator::finish(IterationRecord& record, std::chrono::steady_clock::time_point started) {
  state_.resolved = state_.models.footprint_size();
  record.lattice_queries = state_.lattice_queries;
  record.repair_queries = state_.repair_queries;
  record.resolved = state_.resolved;
  if (config_.truth) record.accuracy = accuracy(state_.models.representative(), *config_.truth);
  record.seconds = since(started);
  report_.iterations.push_back(record);
  if (config_.on_iteration) config_.on_iteration(state_, record);
}

RunResult run_aia(QueryOracle& oracle, std::shared_ptr<const Vocabulary> vocabulary, const ProblemInstance& instance,
                  const std::vector<State>& states, const RunConfig& config) {
  Interrogator interrogator(oracle, std::move(vocabulary), instance, states, config);
  interrogator.run();
  return RunResult{interrogator.state(), interrogator.report()};
}

}  // namespace aia
