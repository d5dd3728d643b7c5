#pragma once

// STRIPS-subset modeling language: vocabulary, palm-tuple models, ground
// atoms and states, parsing, emission and grounding.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aia/errors.hpp"

namespace aia {

enum class Location : std::uint8_t { pre, eff };
enum class Mode : std::uint8_t { positive, negative, none };

inline constexpr Mode kAllModes[] = {Mode::positive, Mode::negative, Mode::none};

std::string_view to_string(Location location);
std::string_view to_string(Mode mode);
Location location_from_string(std::string_view text);
Mode mode_from_string(std::string_view text);

inline constexpr std::string_view kRootSort = "object";

struct PredicateSchema {
  std::string name;
  std::vector<std::string> sorts;  // one per argument, kRootSort when untyped

  std::size_t arity() const { return sorts.size(); }
  auto operator<=>(const PredicateSchema&) const = default;
};

struct ActionHeader {
  std::string name;
  std::vector<std::string> params;  // without the leading '?'
  std::vector<std::string> sorts;

  std::size_t arity() const { return params.size(); }
  auto operator<=>(const ActionHeader&) const = default;
};

/// Predicates, sorts and action headers shared by every model of one domain.
struct Vocabulary {
  std::string domain_name;
  std::vector<std::string> types;             // declaration order
  std::map<std::string, std::string> parent;  // type -> supertype
  std::vector<PredicateSchema> predicates;
  std::vector<ActionHeader> actions;

  bool typed() const { return !types.empty(); }
  const PredicateSchema* find_predicate(std::string_view name) const;
  const ActionHeader* find_action(std::string_view name) const;
  bool is_subtype(std::string_view type, std::string_view of) const;
  bool sorts_overlap(std::string_view a, std::string_view b) const;

  bool operator==(const Vocabulary&) const = default;
};

/// Predicate instantiated with action parameters; args index the parameters.
struct LiftedAtom {
  std::string predicate;
  std::vector<std::size_t> args;

  auto operator<=>(const LiftedAtom&) const = default;
};

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> objects;

  auto operator<=>(const GroundAtom&) const = default;
};

/// Closed world: atoms absent from the set are false.
using State = std::set<GroundAtom>;

struct PalTuple {
  std::string action;
  Location location = Location::pre;
  LiftedAtom atom;

  auto operator<=>(const PalTuple&) const = default;
};

struct PalmTuple {
  PalTuple pal;
  Mode mode = Mode::none;

  auto operator<=>(const PalmTuple&) const = default;
};

/// A set of palm tuples over a vocabulary, holding at most one mode per pal
/// tuple. Mode::none entries record "resolved as absent".
class Model {
 public:
  Model() = default;
  explicit Model(std::shared_ptr<const Vocabulary> vocabulary);

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const { return vocabulary_; }
  const std::map<PalTuple, Mode>& palms() const { return palms_; }
  std::size_t size() const { return palms_.size(); }

  std::optional<Mode> mode_of(const PalTuple& pal) const;
  bool contains_variant(const PalTuple& pal) const { return palms_.count(pal) != 0; }

  /// Throws VariantConflict when another mode of the pal tuple is present and
  /// VocabularyMismatch when the tuple is outside the vocabulary.
  void insert(const PalmTuple& palm);
  bool erase(const PalTuple& pal) { return palms_.erase(pal) != 0; }

  /// Drops the Mode::none entries; two models with equal results ground identically.
  Model without_empty_modes() const;

  bool operator==(const Model& other) const;

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::map<PalTuple, Mode> palms_;
};

struct ProblemInstance {
  std::string name;
  std::string domain_name;
  std::vector<std::pair<std::string, std::string>> objects;  // (name, sort)
  State init;

  const std::string* sort_of(std::string_view object) const;
};

struct ActionCall {
  std::string action;
  std::vector<std::string> args;

  auto operator<=>(const ActionCall&) const = default;
};

using Plan = std::vector<ActionCall>;

struct GroundAction {
  ActionCall call;
  std::vector<GroundAtom> pre_pos;
  std::vector<GroundAtom> pre_neg;
  std::vector<GroundAtom> add;
  std::vector<GroundAtom> del;
};

struct QueryResponse {
  std::size_t prefix_length = 0;
  State final_state;

  bool operator==(const QueryResponse&) const = default;
};

// Parsing and emission.
Model parse_domain(std::string_view text);
ProblemInstance parse_problem(std::string_view text, const Vocabulary& vocabulary);
std::string emit_domain(const Model& model);
std::string emit_problem(const ProblemInstance& instance, const Vocabulary& vocabulary);

/// Identifiers reserved for compiled problems; rejected in user input.
bool is_reserved_identifier(std::string_view name);

std::string to_string(const GroundAtom& atom);
std::string to_string(const ActionCall& call);
std::string to_string(const LiftedAtom& atom, const ActionHeader& header);
std::string to_string(const PalTuple& pal, const Vocabulary& vocabulary);
std::string to_string(const PalmTuple& palm, const Vocabulary& vocabulary);
/// Parses "(pred obj ...)"; throws ParseError.
GroundAtom parse_ground_atom(std::string_view text);
ActionCall parse_action_call(std::string_view text);

// Grounding.

/// Per action, every injective and sort-compatible assignment of the action's
/// parameters to each predicate's slots, sorted.
std::map<std::string, std::vector<LiftedAtom>> instantiate_predicates(const Vocabulary& vocabulary);
std::vector<LiftedAtom> instantiate_predicates(const Vocabulary& vocabulary, const ActionHeader& header);

/// |P*|: instantiations identified across actions by parameter position.
std::size_t count_instantiated_predicates(const Vocabulary& vocabulary);

/// Every pal tuple in the default order: actions in declaration order, pre
/// before eff, atoms lexicographic.
std::vector<PalTuple> all_pal_tuples(const Vocabulary& vocabulary);

GroundAtom ground_atom(const LiftedAtom& atom, std::span<const std::string> objects);

/// Throws MalformedQuery on arity mismatch or repeated objects.
GroundAction ground_action(const Model& model, const ActionHeader& header,
                           std::span<const std::string> objects);
GroundAction ground_action(const Model& model, const ActionCall& call);

bool applicable(const GroundAction& action, const State& state);
State apply_effects(const GroundAction& action, const State& state);

/// Runs the plan until the first inapplicable step.
QueryResponse simulate(const Model& model, const State& initial, const Plan& plan);

/// All distinct-object, sort-compatible calls, sorted by (action, objects).
std::vector<ActionCall> ground_calls(const Vocabulary& vocabulary, const ProblemInstance& instance);

/// All sort-compatible ground atoms with pairwise distinct objects.
std::vector<GroundAtom> ground_atoms(const Vocabulary& vocabulary, const ProblemInstance& instance);

}  // namespace aia
