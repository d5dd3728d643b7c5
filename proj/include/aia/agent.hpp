#pragma once

// Black-box agent: answers plan-outcome queries against a hidden model.

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "aia/pddl.hpp"

namespace aia {

struct PlanOutcomeQuery {
  State initial;
  Plan plan;

  auto operator<=>(const PlanOutcomeQuery&) const = default;
};

enum class QueryKind : std::uint8_t { lattice, repair, probe };
std::string_view to_string(QueryKind kind);
QueryKind query_kind_from_string(std::string_view text);

struct TranscriptRecord {
  std::size_t index = 0;  // 1-based position among distinct queries
  QueryKind kind = QueryKind::probe;
  PlanOutcomeQuery query;
  QueryResponse response;
};

struct Answer {
  QueryResponse response;
  bool fresh = false;  // false on a cache hit
};

/// The only channel through which interrogation learns about an agent.
class QueryOracle {
 public:
  virtual ~QueryOracle() = default;
  virtual Answer ask(const PlanOutcomeQuery& query, QueryKind kind) = 0;
  virtual std::size_t distinct_queries() const = 0;
};

struct RandomWalkResult {
  std::vector<State> states;
  std::vector<Plan> paths;  // paths[k] leads from the initial state to states[k]
};

class Agent final : public QueryOracle {
 public:
  Agent(Model hidden, ProblemInstance instance);

  Answer ask(const PlanOutcomeQuery& query, QueryKind kind) override;
  QueryResponse answer(const PlanOutcomeQuery& query) { return ask(query, QueryKind::probe).response; }
  std::size_t distinct_queries() const override;

  /// Predicates, sorts and action headers; the palm tuples stay hidden.
  const std::shared_ptr<const Vocabulary>& vocabulary() const { return hidden_.vocabulary_ptr(); }
  const ProblemInstance& instance() const { return instance_; }

  std::vector<TranscriptRecord> transcript() const;

  /// Up to `count` distinct states reached by seeded uniform random walks of
  /// `length` steps from the initial state, restarting on dead ends.
  RandomWalkResult random_walks(std::size_t length, std::size_t count, std::uint64_t seed) const;
  std::vector<State> random_walk_states(std::size_t length, std::size_t count, std::uint64_t seed) const {
    return random_walks(length, count, seed).states;
  }

 private:
  void validate(const PlanOutcomeQuery& query) const;

  Model hidden_;
  ProblemInstance instance_;
  std::vector<ActionCall> calls_;
  mutable std::mutex mutex_;
  std::map<PlanOutcomeQuery, QueryResponse> cache_;
  std::vector<TranscriptRecord> transcript_;
};

/// Answers from a recorded transcript; unknown queries are an error.
class ReplayOracle final : public QueryOracle {
 public:
  explicit ReplayOracle(const std::vector<TranscriptRecord>& records);

  Answer ask(const PlanOutcomeQuery& query, QueryKind kind) override;
  std::size_t distinct_queries() const override { return asked_.size(); }
  /// The replayed queries in the order they were asked.
  const std::vector<TranscriptRecord>& transcript() const { return transcript_; }

 private:
  std::map<PlanOutcomeQuery, QueryResponse> recorded_;
  std::set<PlanOutcomeQuery> asked_;
  std::vector<TranscriptRecord> transcript_;
};

}  // namespace aia
