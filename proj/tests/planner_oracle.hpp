#pragma once

// Random grounded problems and an exhaustive breadth-first oracle over
// plain bool vectors, kept apart from the planner's bitset code.

#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>

#include "aia/planner.hpp"

namespace aia::test {

using Flat = std::vector<bool>;

inline bool flat_holds(const Clause& c, const Flat& s) {
  for (const Literal& l : c)
    if (s[l.atom] != l.value) return false;
  return true;
}

inline bool flat_holds(const Dnf& d, const Flat& s) {
  for (const Clause& c : d)
    if (flat_holds(c, s)) return true;
  return false;
}

inline std::optional<Flat> flat_apply(const GroundedAction& a, const Flat& s) {
  if (!flat_holds(a.pre, s)) return std::nullopt;
  Flat next = s;
  std::vector<std::uint32_t> adds;
  for (const ConditionalEffect& e : a.effects) {
    if (!flat_holds(e.condition, s)) continue;
    for (auto d : e.del) next[d] = false;
    adds.insert(adds.end(), e.add.begin(), e.add.end());
  }
  for (auto x : adds) next[x] = true;
  return next;
}

/// Length of a shortest plan within the cap, or nullopt.
inline std::optional<std::size_t> oracle_plan_length(const GroundedProblem& p, std::size_t cap) {
  Flat init(p.atoms.size());
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = p.initial.test(i);
  std::map<Flat, std::size_t> depth{{init, 0}};
  std::queue<Flat> open;
  open.push(init);
  while (!open.empty()) {
    Flat s = open.front();
    open.pop();
    std::size_t d = depth[s];
    if (flat_holds(p.goal, s)) return d;
    if (d == cap) continue;
    for (const GroundedAction& a : p.actions)
      if (auto n = flat_apply(a, s); n && !depth.count(*n)) {
        depth[*n] = d + 1;
        open.push(*n);
      }
  }
  return std::nullopt;
}

inline Clause random_clause(std::size_t atoms, std::size_t max_len, std::mt19937_64& rng) {
  Clause c;
  std::set<std::uint32_t> used;
  std::size_t len = rng() % (max_len + 1);
  for (std::size_t k = 0; k < len; ++k) {
    auto a = static_cast<std::uint32_t>(rng() % atoms);
    if (used.insert(a).second) c.push_back({a, rng() % 3 != 0});
  }
  return c;
}

inline GroundedProblem random_problem(std::mt19937_64& rng) {
  GroundedProblem p;
  const std::size_t n = 3 + rng() % 10;  // at most 12 atoms
  for (std::size_t i = 0; i < n; ++i) p.add_atom({"p" + std::to_string(i), {}});
  p.initial = Bits(n);
  for (std::size_t i = 0; i < n; ++i) p.initial.set(i, rng() % 3 == 0);
  const std::size_t actions = 2 + rng() % 7;
  for (std::size_t k = 0; k < actions; ++k) {
    GroundedAction a;
    a.call = {"a" + std::to_string(k), {}};
    std::size_t clauses = 1 + rng() % 2;
    for (std::size_t c = 0; c < clauses; ++c) a.pre.push_back(random_clause(n, 2, rng));
    std::size_t effects = 1 + rng() % 3;
    for (std::size_t e = 0; e < effects; ++e) {
      ConditionalEffect eff;
      if (rng() % 2) eff.condition = random_clause(n, 2, rng);
      for (std::size_t x = 0; x < 1 + rng() % 2; ++x) eff.add.push_back(static_cast<std::uint32_t>(rng() % n));
      for (std::size_t x = 0; x < rng() % 2; ++x) eff.del.push_back(static_cast<std::uint32_t>(rng() % n));
      a.effects.push_back(std::move(eff));
    }
    p.actions.push_back(std::move(a));
  }
  std::size_t goal_clauses = 1 + rng() % 2;
  for (std::size_t c = 0; c < goal_clauses; ++c) {
    Clause g = random_clause(n, 3, rng);
    if (g.empty()) g.push_back({static_cast<std::uint32_t>(rng() % n), true});
    p.goal.push_back(std::move(g));
  }
  return p;
}

}  // namespace aia::test
