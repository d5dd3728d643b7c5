#include "aia/planner.hpp"

#include <bit>
#include <deque>
#include <unordered_set>

namespace aia {

std::size_t Bits::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t Bits::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

std::uint32_t GroundedProblem::add_atom(const GroundAtom& atom) {
  auto [it, inserted] = index.emplace(to_string(atom), static_cast<std::uint32_t>(atoms.size()));
  if (inserted) atoms.push_back(atom);
  return it->second;
}

std::optional<std::uint32_t> GroundedProblem::find(const GroundAtom& atom) const {
  auto it = index.find(to_string(atom));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Bits GroundedProblem::encode(const State& state) const {
  Bits bits(atoms.size());
  for (const GroundAtom& atom : state)
    if (auto i = find(atom)) bits.set(*i);
  return bits;
}

State GroundedProblem::decode(const Bits& bits) const {
  State state;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (bits.test(i)) state.insert(atoms[i]);
  return state;
}

bool holds(const Clause& clause, const Bits& state) {
  for (const Literal& lit : clause)
    if (state.test(lit.atom) != lit.value) return false;
  return true;
}

bool holds(const Dnf& formula, const Bits& state) {
  for (const Clause& clause : formula)
    if (holds(clause, state)) return true;
  return false;
}

std::optional<Bits> apply(const GroundedAction& action, const Bits& state) {
  if (!holds(action.pre, state)) return std::nullopt;
  Bits next = state;
  std::vector<const ConditionalEffect*> firing;
  for (const ConditionalEffect& effect : action.effects)
    if (holds(effect.condition, state)) firing.push_back(&effect);
  for (const ConditionalEffect* effect : firing)
    for (std::uint32_t atom : effect->del) next.set(atom, false);
  for (const ConditionalEffect* effect : firing)
    for (std::uint32_t atom : effect->add) next.set(atom, true);
  return next;
}

std::optional<std::vector<std::size_t>> solve(const GroundedProblem& problem, const SearchLimits& limits) {
  if (holds(problem.goal, problem.initial)) return std::vector<std::size_t>{};
  if (limits.plan_cap == 0) return std::nullopt;

  struct Node {
    Bits state;
    std::size_t parent;
    std::size_t action;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_set<Bits, BitsHash> seen;
  nodes.push_back(Node{problem.initial, 0, 0, 0});
  seen.insert(problem.initial);

  auto extract = [&](std::size_t leaf) {
    std::vector<std::size_t> plan;
    for (std::size_t k = leaf; k != 0; k = nodes[k].parent) plan.push_back(nodes[k].action);
    return std::vector<std::size_t>(plan.rbegin(), plan.rend());
  };

  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if (nodes[head].depth >= limits.plan_cap) break;
    for (std::size_t a = 0; a < problem.actions.size(); ++a) {
      std::optional<Bits> next = apply(problem.actions[a], nodes[head].state);
      if (!next || !seen.insert(*next).second) continue;
      if (nodes.size() >= limits.node_cap)
        throw ResourceLimit("planner node cap of " + std::to_string(limits.node_cap) + " states reached");
      nodes.push_back(Node{std::move(*next), head, a, nodes[head].depth + 1});
      if (holds(problem.goal, nodes.back().state)) return extract(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

Validation validate(const GroundedProblem& problem, const std::vector<std::size_t>& plan) {
  Bits state = problem.initial;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (plan[k] >= problem.actions.size()) return Validation{false, k};
    std::optional<Bits> next = apply(problem.actions[plan[k]], state);
    if (!next) return Validation{false, k};
    state = std::move(*next);
  }
  return Validation{holds(problem.goal, state), std::nullopt};
}

std::string trace(const GroundedProblem& problem, const std::vector<std::size_t>& plan) {
  std::string out;
  Bits state = problem.initial;
  auto dump = [&](const Bits& bits) {
    for (const GroundAtom& atom : problem.decode(bits)) out += "  " + to_string(atom) + "\n";
  };
  out += "initial\n";
  dump(state);
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const GroundedAction& action = problem.actions[plan[k]];
    out += "step " + std::to_string(k + 1) + " " + to_string(action.call) + "\n";
    std::optional<Bits> next = apply(action, state);
    if (!next) {
      out += "  inapplicable\n";
      break;
    }
    state = std::move(*next);
    dump(state);
  }
  return out;
}

}  // namespace aia
