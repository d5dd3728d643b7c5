#pragma once

// Forward breadth-first search over grounded problems with disjunctive
// preconditions and conditional effects.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aia/pddl.hpp"

namespace aia {

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  std::size_t count() const;
  std::size_t hash() const;

  bool operator==(const Bits&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& bits) const { return bits.hash(); }
};

struct Literal {
  std::uint32_t atom = 0;
  bool value = true;

  auto operator<=>(const Literal&) const = default;
};

using Clause = std::vector<Literal>;  // conjunction
using Dnf = std::vector<Clause>;      // disjunction of conjunctions

struct ConditionalEffect {
  Clause condition;
  std::vector<std::uint32_t> add;
  std::vector<std::uint32_t> del;
};

struct GroundedAction {
  ActionCall call;
  Dnf pre;
  std::vector<ConditionalEffect> effects;
};

struct GroundedProblem {
  std::vector<GroundAtom> atoms;
  std::unordered_map<std::string, std::uint32_t> index;  // keyed by to_string(atom)
  std::vector<GroundedAction> actions;                   // sorted by (name, objects)
  Bits initial;
  Dnf goal;

  std::uint32_t add_atom(const GroundAtom& atom);
  std::optional<std::uint32_t> find(const GroundAtom& atom) const;
  Bits encode(const State& state) const;
  State decode(const Bits& bits) const;
};

bool holds(const Clause& clause, const Bits& state);
bool holds(const Dnf& formula, const Bits& state);

/// Nullopt when no precondition clause holds. Every effect condition is
/// evaluated on the pre-state; deletes are applied before adds.
std::optional<Bits> apply(const GroundedAction& action, const Bits& state);

struct SearchLimits {
  std::size_t plan_cap = 10;
  std::size_t node_cap = 2'000'000;
};

/// A shortest plan of at most plan_cap steps, as indices into problem.actions,
/// or nullopt if none exists. Throws ResourceLimit once node_cap states are stored.
std::optional<std::vector<std::size_t>> solve(const GroundedProblem& problem, const SearchLimits& limits = {});

struct Validation {
  bool valid = false;
  std::optional<std::size_t> failing_step;  // 0-based; nullopt when every step applied
};

Validation validate(const GroundedProblem& problem, const std::vector<std::size_t>& plan);

/// One state per step, one atom per line; for debugging.
std::string trace(const GroundedProblem& problem, const std::vector<std::size_t>& plan);

}  // namespace aia
