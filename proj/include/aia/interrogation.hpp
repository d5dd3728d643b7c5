#pragma once

// The interrogation loop: query generation per pal tuple, model filtering,
// pal-ordering repair after agent failures, and equivalence checking.

#include <chrono>
#include <functional>
#include <optional>

#include "aia/agent.hpp"
#include "aia/model_space.hpp"
#include "aia/query_gen.hpp"

namespace aia {

struct FilterOutcome {
  bool repair = false;  // the agent stopped early; nothing is pruned
  bool consistent_i = false;
  bool consistent_j = false;
  QueryResponse response_i;
  QueryResponse response_j;
  std::vector<Mode> pruned;
};

/// Whether a twin explains the agent's response. Atoms written by an action
/// whose effect on them is unresolved, or resolved to alternatives that
/// disagree, are excluded from the comparison.
bool consistent(const TwinModel& twin, const PlanOutcomeQuery& query, const QueryResponse& agent,
                const QueryResponse& predicted, const ModelSet* alternatives = nullptr);

FilterOutcome filter_models(const PlanOutcomeQuery& query, const QueryResponse& agent, const TwinModel& twin_i,
                            const TwinModel& twin_j, const ModelSet* alternatives = nullptr);

struct FailureContext {
  ActionCall failed;    // the step the agent could not execute
  State before;         // agent state just before that step
  PlanOutcomeQuery query;
  std::size_t prefix_length = 0;
};

FailureContext failure_context(const PlanOutcomeQuery& query, const QueryResponse& response);

struct RepairResult {
  std::map<PalTuple, Mode> resolved;
  std::map<PalTuple, std::set<Mode>> excluded;
  State executable;  // pool state where the failed action runs
  std::size_t probes = 0;
};

/// A step whose outcome an earlier answer already revealed.
struct Observation {
  State state;
  ActionCall call;
  bool executed = false;
};

/// What the learner already knows when a repair starts.
struct RepairKnowledge {
  const ModelSet* models = nullptr;
  const std::map<PalTuple, std::set<Mode>>* excluded = nullptr;
  const std::vector<Observation>* observations = nullptr;
};

/// Finds a situation (pool state and call of the failed action) where the
/// agent executes it, then walks from there towards the failure situation
/// one instantiated predicate at a time, resolving the precondition mode of
/// every predicate on the way. Known modes and observed outcomes replace
/// probes where they suffice.
RepairResult update_pal_ordering(const FailureContext& context, const std::vector<State>& states,
                                 QueryOracle& oracle, const ProblemInstance& instance, const Vocabulary& vocabulary,
                                 const RepairKnowledge& knowledge = {});

struct EquivalenceResult {
  bool equivalent = true;
  std::optional<PlanOutcomeQuery> witness;
  std::optional<Model> member;  // set checks only: a member that disagrees
};

/// Compares responses on every plan of at most `bound` steps from every state.
EquivalenceResult functionally_equivalent(const Model& a, const Model& b, const std::vector<State>& states,
                                          const ProblemInstance& instance, std::size_t bound);

/// Exact check that every member of the set answers like `truth` on every
/// plan of at most `bound` steps from the given states.
EquivalenceResult all_members_equivalent(const ModelSet& models, const Model& truth, const std::vector<State>& states,
                                         const ProblemInstance& instance, std::size_t bound);

struct PairRecord {
  Mode mode_i = Mode::positive;
  Mode mode_j = Mode::negative;
  std::optional<PlanOutcomeQuery> query;
  std::optional<QueryResponse> agent;
  FilterOutcome filter;
  std::size_t states_tried = 0;
  bool fresh = false;
  double seconds = 0;  // agent time for this query
};

struct IterationRecord {
  std::size_t index = 0;
  PalTuple pal;
  bool consolidation = false;
  std::vector<PairRecord> pairs;
  std::vector<Mode> retained;
  std::vector<PalmTuple> repaired;
  std::size_t repair_probes = 0;
  bool stalled = false;  // a repair made no progress; the remaining modes were kept
  std::size_t lattice_queries = 0;  // cumulative
  std::size_t repair_queries = 0;   // cumulative
  std::size_t resolved = 0;
  std::optional<double> accuracy;
  double seconds = 0;
};

struct InterrogationState {
  PalOrdering ordering;
  ModelSet models;
  std::map<PalTuple, std::set<Mode>> excluded;
  std::set<PalmTuple> pruned;
  std::size_t resolved = 0;
  std::size_t lattice_queries = 0;
  std::size_t repair_queries = 0;
  std::size_t iterations = 0;
  bool consolidated = false;
};

struct RunConfig {
  SearchLimits limits;
  bool consolidate = true;
  const Model* truth = nullptr;  // evaluation harnesses only
  std::function<void(const InterrogationState&, const IterationRecord&)> on_iteration;
};

struct RunReport {
  std::vector<IterationRecord> iterations;
  std::vector<double> query_seconds;
  std::size_t safety_violations = 0;
  std::size_t instantiated_predicates = 0;
  std::size_t actions = 0;
  std::size_t pal_tuples = 0;
};

class Interrogator {
 public:
  Interrogator(QueryOracle& oracle, std::shared_ptr<const Vocabulary> vocabulary, ProblemInstance instance,
               std::vector<State> states, RunConfig config);
  /// Continues from a checkpoint.
  Interrogator(QueryOracle& oracle, std::shared_ptr<const Vocabulary> vocabulary, ProblemInstance instance,
               std::vector<State> states, RunConfig config, InterrogationState resume);

  /// Runs to convergence. On an exception the partial state stays readable.
  void run();
  bool step();  // one outer iteration; false when nothing is left

  const InterrogationState& state() const { return state_; }
  const RunReport& report() const { return report_; }

 private:
  void process(const PalTuple& pal, bool consolidation);
  bool apply_repair(const RepairResult& repair, const PalTuple& current, std::set<Mode>& alive,
                    IterationRecord& record);
  Answer ask(const PlanOutcomeQuery& query, QueryKind kind, double& seconds);
  void observe(const PlanOutcomeQuery& query, const QueryResponse& response);
  void finish(IterationRecord& record, std::chrono::steady_clock::time_point started);
  bool consolidation_round();

  QueryOracle& oracle_;
  std::shared_ptr<const Vocabulary> vocabulary_;
  ProblemInstance instance_;
  std::vector<State> states_;
  RunConfig config_;
  InterrogationState state_;
  RunReport report_;
  std::vector<Observation> observations_;
};

struct RunResult {
  InterrogationState state;
  RunReport report;
};

RunResult run_aia(QueryOracle& oracle, std::shared_ptr<const Vocabulary> vocabulary, const ProblemInstance& instance,
                  const std::vector<State>& states, const RunConfig& config = {});

}  // namespace aia
