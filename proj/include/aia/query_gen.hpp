#pragma once

// Twin models and their compilation into a planning problem whose solutions
// are plans on which the twins disagree.

#include <optional>
#include <set>
#include <utility>

#include "aia/agent.hpp"
#include "aia/planner.hpp"

namespace aia {

inline constexpr std::string_view kGuardPredicate = "aia__pu";
inline constexpr std::string_view kFlagPredicate = "aia__psi";
inline constexpr std::string_view kSuffixI = "__aia_i";
inline constexpr std::string_view kSuffixJ = "__aia_j";

enum class TwinRole : std::uint8_t { i, j };

GroundAtom guard_atom();

/// A candidate model plus the guard atom used only while searching for a
/// query. Every action requires the guard to be false; actions with an
/// effect tuple not yet resolved make it true, so a plan can only continue
/// past actions whose effects are fully known.
struct TwinModel {
  Model model;  // base plus the tested palm tuple; never mentions the guard
  PalTuple pal;
  Mode mode = Mode::none;
  TwinRole role = TwinRole::i;
  std::set<std::string> guard_setters;  // actions adding the guard

  GroundAction ground(const ActionCall& call) const;
};

/// Runs the plan under twin semantics. The initial state must not contain the guard.
QueryResponse simulate(const TwinModel& twin, const State& initial, const Plan& plan);

/// Throws VariantConflict if base resolves pal, Error if the modes coincide.
std::pair<TwinModel, TwinModel> build_twins(const Model& base, const PalTuple& pal, Mode mode_i, Mode mode_j);

struct CompiledProblem {
  TwinModel twin_i;
  TwinModel twin_j;
  State initial;
};

CompiledProblem compile_ppo(const TwinModel& twin_i, const TwinModel& twin_j, const State& initial);

/// Every distinct-object call over the instance's objects, with the twin
/// atoms renamed by suffix, one guard per copy and the divergence flag.
/// Throws ResourceLimit when more than action_cap actions would be grounded.
GroundedProblem ground(const CompiledProblem& problem, const ProblemInstance& instance,
                       std::size_t action_cap = 200'000);

/// Replaces the initial state of a grounded compilation (both copies).
void set_initial(GroundedProblem& grounded, const State& initial);

/// Domain and problem text with disjunctive preconditions and conditional
/// effects, for checking with an external planner.
std::pair<std::string, std::string> emit_compiled_problem(const CompiledProblem& problem,
                                                          const ProblemInstance& instance);

struct GeneratedQuery {
  std::optional<PlanOutcomeQuery> query;
  TwinModel twin_i;
  TwinModel twin_j;
  std::size_t states_tried = 0;
};

/// Tries the states in order and returns the plan of the first solvable
/// compilation. No query means the twins agree on every state within the cap.
GeneratedQuery generate_query(const Model& base, const PalTuple& pal, Mode mode_i, Mode mode_j,
                              const std::vector<State>& states, const ProblemInstance& instance,
                              const SearchLimits& limits = {});

}  // namespace aia
