#include "aia/agent.hpp"

#include <random>

namespace aia {

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::lattice:
      return "lattice";
    case QueryKind::repair:
      return "repair";
    case QueryKind::probe:
      break;
  }
  return "probe";
}

QueryKind query_kind_from_string(std::string_view text) {
  if (text == "lattice") return QueryKind::lattice;
  if (text == "repair") return QueryKind::repair;
  if (text == "probe") return QueryKind::probe;
  throw Error("unknown query kind '" + std::string(text) + "'");
}

Agent::Agent(Model hidden, ProblemInstance instance)
    : hidden_(std::move(hidden)), instance_(std::move(instance)) {
  calls_ = ground_calls(hidden_.vocabulary(), instance_);
}

void Agent::validate(const PlanOutcomeQuery& query) const {
  const Vocabulary& vocab = hidden_.vocabulary();
  for (const GroundAtom& atom : query.initial) {
    const PredicateSchema* schema = vocab.find_predicate(atom.predicate);
    if (!schema) throw MalformedQuery("unknown predicate in state: " + to_string(atom));
    if (schema->arity() != atom.objects.size()) throw MalformedQuery("arity mismatch in state: " + to_string(atom));
    for (const std::string& obj : atom.objects)
      if (!instance_.sort_of(obj)) throw MalformedQuery("unknown object in state: " + to_string(atom));
  }
  for (const ActionCall& call : query.plan) {
    const ActionHeader* header = vocab.find_action(call.action);
    if (!header) throw MalformedQuery("unknown action in plan: " + to_string(call));
    if (header->arity() != call.args.size()) throw MalformedQuery("arity mismatch in plan: " + to_string(call));
    for (std::size_t k = 0; k < call.args.size(); ++k) {
      const std::string* sort = instance_.sort_of(call.args[k]);
      if (!sort) throw MalformedQuery("unknown object in plan: " + to_string(call));
      if (!vocab.is_subtype(*sort, header->sorts[k])) throw MalformedQuery("ill-typed call: " + to_string(call));
    }
  }
}

Answer Agent::ask(const PlanOutcomeQuery& query, QueryKind kind) {
  validate(query);
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(query); it != cache_.end()) return Answer{it->second, false};
  QueryResponse response = simulate(hidden_, query.initial, query.plan);
  cache_.emplace(query, response);
  transcript_.push_back(TranscriptRecord{transcript_.size() + 1, kind, query, response});
  return Answer{std::move(response), true};
}

std::size_t Agent::distinct_queries() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::vector<TranscriptRecord> Agent::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

RandomWalkResult Agent::random_walks(std::size_t length, std::size_t count, std::uint64_t seed) const {
  RandomWalkResult result;
  std::set<State> seen;
  auto record = [&](const State& state, const Plan& path) {
    if (result.states.size() < count && seen.insert(state).second) {
      result.states.push_back(state);
      result.paths.push_back(path);
    }
  };
  record(instance_.init, {});
  if (length == 0 || count <= 1) return result;

  std::mt19937_64 rng(seed);
  const std::size_t budget = count * length * 8;
  std::size_t steps = 0;
  while (result.states.size() < count && steps < budget) {
    State state = instance_.init;
    Plan path;
    for (std::size_t k = 0; k < length && steps < budget; ++k, ++steps) {
      std::vector<GroundAction> options;
      for (const ActionCall& call : calls_) {
        GroundAction action = ground_action(hidden_, call);
        if (applicable(action, state)) options.push_back(std::move(action));
      }
      if (options.empty()) break;
      const GroundAction& chosen = options[rng() % options.size()];
      state = apply_effects(chosen, state);
      path.push_back(chosen.call);
      record(state, path);
      if (result.states.size() >= count) break;
    }
    if (path.empty()) break;  // dead end at the initial state
  }
  return result;
}

ReplayOracle::ReplayOracle(const std::vector<TranscriptRecord>& records) {
  for (const TranscriptRecord& record : records) recorded_.emplace(record.query, record.response);
}

Answer ReplayOracle::ask(const PlanOutcomeQuery& query, QueryKind kind) {
  auto it = recorded_.find(query);
  if (it == recorded_.end()) throw AgentInconsistency("query not present in the replayed transcript");
  bool fresh = asked_.insert(query).second;
  if (fresh) transcript_.push_back(TranscriptRecord{transcript_.size() + 1, kind, query, it->second});
  return Answer{it->second, fresh};
}

}  // namespace aia
