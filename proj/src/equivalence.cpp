#include <algorithm>

#include "aia/interrogation.hpp"

namespace aia {

namespace {

struct Grounded {
  std::vector<ActionCall> calls;
  std::vector<GroundAction> a;
  std::vector<GroundAction> b;
};

class Search {
 public:
  Search(const Grounded& g, std::size_t bound) : g_(g), bound_(bound) {}

  std::optional<PlanOutcomeQuery> run(const State& initial) {
    initial_ = &initial;
    plan_.clear();
    return visit(initial, bound_);
  }

 private:
  std::optional<PlanOutcomeQuery> visit(const State& state, std::size_t remaining) {
    if (remaining == 0) return std::nullopt;
    auto [it, inserted] = best_.emplace(state, remaining);
    if (!inserted) {
      if (it->second >= remaining) return std::nullopt;
      it->second = remaining;
    }
    for (std::size_t k = 0; k < g_.calls.size(); ++k) {
      bool in_a = applicable(g_.a[k], state);
      bool in_b = applicable(g_.b[k], state);
      plan_.push_back(g_.calls[k]);
      if (in_a != in_b) return PlanOutcomeQuery{*initial_, plan_};
      if (in_a) {
        State next_a = apply_effects(g_.a[k], state);
        if (next_a != apply_effects(g_.b[k], state)) return PlanOutcomeQuery{*initial_, plan_};
        if (auto witness = visit(next_a, remaining - 1)) return witness;
      }
      plan_.pop_back();
    }
    return std::nullopt;
  }

  const Grounded& g_;
  std::size_t bound_;
  const State* initial_ = nullptr;
  Plan plan_;
  std::map<State, std::size_t> best_;
};

}  // namespace

EquivalenceResult functionally_equivalent(const Model& a, const Model& b, const std::vector<State>& states,
                                          const ProblemInstance& instance, std::size_t bound) {
  require_same_vocabulary(a.vocabulary(), b.vocabulary());
  Grounded g;
  g.calls = ground_calls(a.vocabulary(), instance);
  for (const ActionCall& call : g.calls) {
    g.a.push_back(ground_action(a, call));
    g.b.push_back(ground_action(b, call));
  }
  for (const State& state : states) {
    Search search(g, bound);
    if (auto witness = search.run(state)) return EquivalenceResult{false, std::move(witness), std::nullopt};
  }
  return {};
}

EquivalenceResult all_members_equivalent(const ModelSet& models, const Model& truth, const std::vector<State>& states,
                                         const ProblemInstance& instance, std::size_t bound) {
  const Vocabulary& vocab = truth.vocabulary();
  require_same_vocabulary(models.vocabulary(), vocab);
  const std::vector<ActionCall> calls = ground_calls(vocab, instance);
  const auto lifted = instantiate_predicates(vocab);
  const Model representative = models.representative();

  auto modes_of = [&](const PalTuple& pal) {
    auto it = models.alternatives().find(pal);
    return it == models.alternatives().end() ? std::vector<Mode>{Mode::none} : it->second;
  };
  auto holds = [](Mode mode, bool value) {
    return mode == Mode::none || (mode == Mode::positive) == value;
  };
  auto counterexample = [&](const Model& member, const State& origin, Plan plan) {
    return EquivalenceResult{false, PlanOutcomeQuery{origin, std::move(plan)}, member};
  };

  // States where a step is still taken within the bound, with a path from a pool state.
  struct Node {
    State state;
    const State* origin;
    Plan path;
  };
  std::vector<Node> frontier;
  std::set<State> seen;
  for (const State& s : states)
    if (seen.insert(s).second) frontier.push_back(Node{s, &s, {}});

  for (std::size_t depth = 0; depth < bound && !frontier.empty(); ++depth) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      for (const ActionCall& call : calls) {
        const std::vector<LiftedAtom>& atoms = lifted.at(call.action);
        GroundAction real = ground_action(truth, call);
        const bool ok = applicable(real, node.state);
        Plan plan = node.path;
        plan.push_back(call);

        if (ok) {
          // Every retained precondition alternative must hold.
          for (const LiftedAtom& atom : atoms) {
            PalTuple pal{call.action, Location::pre, atom};
            bool value = node.state.count(ground_atom(atom, call.args)) != 0;
            for (Mode m : modes_of(pal)) {
              if (holds(m, value)) continue;
              Model member = representative;
              member.erase(pal);
              member.insert(PalmTuple{pal, m});
              return counterexample(member, *node.origin, plan);
            }
          }
          State after = apply_effects(real, node.state);
          for (const LiftedAtom& atom : atoms) {
            PalTuple pal{call.action, Location::eff, atom};
            GroundAtom g = ground_atom(atom, call.args);
            bool before = node.state.count(g) != 0;
            bool expected = after.count(g) != 0;
            for (Mode m : modes_of(pal)) {
              bool v = m == Mode::none ? before : m == Mode::positive;
              if (v == expected) continue;
              Model member = representative;
              member.erase(pal);
              member.insert(PalmTuple{pal, m});
              return counterexample(member, *node.origin, plan);
            }
          }
          if (depth + 1 < bound && seen.insert(after).second)
            next.push_back(Node{std::move(after), node.origin, std::move(plan)});
        } else {
          // Some tuple must fail under every retained alternative.
          bool blocked = false;
          Model member = representative;
          for (const LiftedAtom& atom : atoms) {
            PalTuple pal{call.action, Location::pre, atom};
            bool value = node.state.count(ground_atom(atom, call.args)) != 0;
            std::vector<Mode> modes = modes_of(pal);
            auto pass = std::find_if(modes.begin(), modes.end(), [&](Mode m) { return holds(m, value); });
            if (pass == modes.end()) {
              blocked = true;
              break;
            }
            if (models.in_footprint(pal)) {
              member.erase(pal);
              member.insert(PalmTuple{pal, *pass});
            }
          }
          if (!blocked) return counterexample(member, *node.origin, plan);
        }
      }
    }
    frontier = std::move(next);
  }
  return {};
}

}  // namespace aia
