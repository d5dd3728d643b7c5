#include "aia/query_gen.hpp"

#include <algorithm>

#include "aia/model_space.hpp"

namespace aia {

GroundAtom guard_atom() { return GroundAtom{std::string(kGuardPredicate), {}}; }

namespace {

GroundAtom renamed(const GroundAtom& atom, std::string_view suffix) {
  return GroundAtom{atom.predicate + std::string(suffix), atom.objects};
}

bool effects_resolved(const Model& model, const ActionHeader& header) {
  for (const LiftedAtom& atom : instantiate_predicates(model.vocabulary(), header))
    if (!model.contains_variant(PalTuple{header.name, Location::eff, atom})) return false;
  return true;
}

TwinModel make_twin(const Model& base, const PalTuple& pal, Mode mode, TwinRole role) {
  TwinModel twin{refine(base, pal, mode), pal, mode, role, {}};
  for (const ActionHeader& header : base.vocabulary().actions)
    if (!effects_resolved(twin.model, header)) twin.guard_setters.insert(header.name);
  return twin;
}

}  // namespace

GroundAction TwinModel::ground(const ActionCall& call) const {
  GroundAction action = ground_action(model, call);
  action.pre_neg.push_back(guard_atom());
  if (guard_setters.count(call.action)) action.add.push_back(guard_atom());
  return action;
}

QueryResponse simulate(const TwinModel& twin, const State& initial, const Plan& plan) {
  QueryResponse response{0, initial};
  for (const ActionCall& call : plan) {
    GroundAction action = twin.ground(call);
    if (!applicable(action, response.final_state)) break;
    response.final_state = apply_effects(action, response.final_state);
    ++response.prefix_length;
  }
  return response;
}

std::pair<TwinModel, TwinModel> build_twins(const Model& base, const PalTuple& pal, Mode mode_i, Mode mode_j) {
  if (mode_i == mode_j) throw Error("twin models need two different modes");
  if (base.contains_variant(pal))
    throw VariantConflict("base already resolves " + to_string(pal, base.vocabulary()));
  return {make_twin(base, pal, mode_i, TwinRole::i), make_twin(base, pal, mode_j, TwinRole::j)};
}

CompiledProblem compile_ppo(const TwinModel& twin_i, const TwinModel& twin_j, const State& initial) {
  if (twin_i.model.vocabulary_ptr() != twin_j.model.vocabulary_ptr() &&
      !(twin_i.model.vocabulary() == twin_j.model.vocabulary()))
    throw VocabularyMismatch("twins over different vocabularies");
  return CompiledProblem{twin_i, twin_j, initial};
}

GroundedProblem ground(const CompiledProblem& problem, const ProblemInstance& instance, std::size_t action_cap) {
  const Vocabulary& vocab = problem.twin_i.model.vocabulary();
  std::vector<ActionCall> calls = ground_calls(vocab, instance);
  if (calls.size() > action_cap)
    throw ResourceLimit("grounding would create " + std::to_string(calls.size()) + " actions (cap " +
                        std::to_string(action_cap) + ")");

  GroundedProblem out;
  std::vector<GroundAtom> base = ground_atoms(vocab, instance);
  for (const GroundAtom& atom : base) {
    out.add_atom(renamed(atom, kSuffixI));
    out.add_atom(renamed(atom, kSuffixJ));
  }
  const std::uint32_t guard_i = out.add_atom(renamed(guard_atom(), kSuffixI));
  const std::uint32_t guard_j = out.add_atom(renamed(guard_atom(), kSuffixJ));
  const std::uint32_t flag = out.add_atom(GroundAtom{std::string(kFlagPredicate), {}});

  auto lits = [&](const std::vector<GroundAtom>& atoms, bool value, std::string_view suffix, Clause& into) {
    for (const GroundAtom& atom : atoms) into.push_back(Literal{out.add_atom(renamed(atom, suffix)), value});
  };
  auto ids = [&](const std::vector<GroundAtom>& atoms, std::string_view suffix) {
    std::vector<std::uint32_t> v;
    for (const GroundAtom& atom : atoms) v.push_back(out.add_atom(renamed(atom, suffix)));
    return v;
  };

  for (const ActionCall& call : calls) {
    GroundAction gi = problem.twin_i.ground(call);
    GroundAction gj = problem.twin_j.ground(call);
    Clause ci;
    Clause cj;
    lits(gi.pre_pos, true, kSuffixI, ci);
    lits(gi.pre_neg, false, kSuffixI, ci);
    lits(gj.pre_pos, true, kSuffixJ, cj);
    lits(gj.pre_neg, false, kSuffixJ, cj);

    GroundedAction action;
    action.call = call;
    action.pre = {ci, cj};

    ConditionalEffect both;
    both.condition = ci;
    both.condition.insert(both.condition.end(), cj.begin(), cj.end());
    both.add = ids(gi.add, kSuffixI);
    for (std::uint32_t a : ids(gj.add, kSuffixJ)) both.add.push_back(a);
    both.del = ids(gi.del, kSuffixI);
    for (std::uint32_t d : ids(gj.del, kSuffixJ)) both.del.push_back(d);
    action.effects.push_back(std::move(both));

    // Exactly one copy applicable: one side holds while some literal of the other fails.
    for (const auto& [holding, other] : {std::pair{&ci, &cj}, std::pair{&cj, &ci}}) {
      for (const Literal& lit : *other) {
        ConditionalEffect diverge;
        diverge.condition = *holding;
        diverge.condition.push_back(Literal{lit.atom, !lit.value});
        diverge.add = {flag};
        action.effects.push_back(std::move(diverge));
      }
    }
    out.actions.push_back(std::move(action));
  }

  // Pair every copy-i atom, including ones reached only through action groundings.
  const std::size_t registered = out.atoms.size();
  for (std::size_t k = 0; k < registered; ++k) {
    const std::string& pred = out.atoms[k].predicate;
    if (k == guard_i || k == guard_j || k == flag || !pred.ends_with(kSuffixI)) continue;
    GroundAtom other = out.atoms[k];
    other.predicate.replace(other.predicate.size() - kSuffixI.size(), kSuffixI.size(), kSuffixJ);
    const auto i = static_cast<std::uint32_t>(k);
    const std::uint32_t j = out.add_atom(other);
    out.goal.push_back({Literal{i, true}, Literal{j, false}});
    out.goal.push_back({Literal{i, false}, Literal{j, true}});
  }
  out.goal.push_back({Literal{flag, true}});
  set_initial(out, problem.initial);
  return out;
}

void set_initial(GroundedProblem& grounded, const State& initial) {
  Bits bits(grounded.atoms.size());
  for (const GroundAtom& atom : initial) {
    if (auto i = grounded.find(renamed(atom, kSuffixI))) bits.set(*i);
    if (auto j = grounded.find(renamed(atom, kSuffixJ))) bits.set(*j);
  }
  grounded.initial = std::move(bits);
}

namespace {

std::string lifted(const PalTuple& pal, const ActionHeader& header, std::string_view suffix) {
  std::string out = "(" + pal.atom.predicate + std::string(suffix);
  for (std::size_t arg : pal.atom.args) out += " ?" + header.params[arg];
  return out + ")";
}

std::string conjunction(const TwinModel& twin, const ActionHeader& header, std::string_view suffix) {
  std::string out = "(and (not (" + std::string(kGuardPredicate) + std::string(suffix) + "))";
  for (const auto& [pal, mode] : twin.model.palms()) {
    if (pal.action != header.name || pal.location != Location::pre || mode == Mode::none) continue;
    std::string atom = lifted(pal, header, suffix);
    out += " " + (mode == Mode::positive ? atom : "(not " + atom + ")");
  }
  return out + ")";
}

std::vector<std::string> literals(const TwinModel& twin, const ActionHeader& header, std::string_view suffix) {
  std::vector<std::string> out{"(not (" + std::string(kGuardPredicate) + std::string(suffix) + "))"};
  for (const auto& [pal, mode] : twin.model.palms()) {
    if (pal.action != header.name || pal.location != Location::pre || mode == Mode::none) continue;
    std::string atom = lifted(pal, header, suffix);
    out.push_back(mode == Mode::positive ? atom : "(not " + atom + ")");
  }
  return out;
}

std::string negate(const std::string& literal) {
  if (literal.rfind("(not ", 0) == 0) return literal.substr(5, literal.size() - 6);
  return "(not " + literal + ")";
}

std::string effects(const TwinModel& twin, const ActionHeader& header, std::string_view suffix) {
  std::string out;
  for (const auto& [pal, mode] : twin.model.palms()) {
    if (pal.action != header.name || pal.location != Location::eff || mode == Mode::none) continue;
    std::string atom = lifted(pal, header, suffix);
    out += " " + (mode == Mode::positive ? atom : "(not " + atom + ")");
  }
  if (twin.guard_setters.count(header.name)) out += " (" + std::string(kGuardPredicate) + std::string(suffix) + ")";
  return out;
}

}  // namespace

std::pair<std::string, std::string> emit_compiled_problem(const CompiledProblem& problem,
                                                          const ProblemInstance& instance) {
  const Vocabulary& vocab = problem.twin_i.model.vocabulary();
  std::string d = "(define (domain " + vocab.domain_name + "-twins)\n";
  d += "  (:requirements :strips";
  if (vocab.typed()) d += " :typing";
  d += " :negative-preconditions :disjunctive-preconditions :conditional-effects)\n";
  if (vocab.typed()) {
    d += "  (:types";
    for (const std::string& type : vocab.types) d += " " + type + " - " + vocab.parent.at(type);
    d += ")\n";
  }
  d += "  (:predicates\n";
  for (std::string_view suffix : {kSuffixI, kSuffixJ}) {
    for (const PredicateSchema& schema : vocab.predicates) {
      d += "    (" + schema.name + std::string(suffix);
      for (std::size_t k = 0; k < schema.arity(); ++k) {
        d += " ?x" + std::to_string(k + 1);
        if (vocab.typed()) d += " - " + schema.sorts[k];
      }
      d += ")\n";
    }
    d += "    (" + std::string(kGuardPredicate) + std::string(suffix) + ")\n";
  }
  d += "    (" + std::string(kFlagPredicate) + "))\n";

  for (const ActionHeader& header : vocab.actions) {
    d += "  (:action " + header.name + "\n    :parameters (";
    for (std::size_t k = 0; k < header.arity(); ++k) {
      if (k) d += " ";
      d += "?" + header.params[k];
      if (vocab.typed()) d += " - " + header.sorts[k];
    }
    d += ")\n";
    std::string ci = conjunction(problem.twin_i, header, kSuffixI);
    std::string cj = conjunction(problem.twin_j, header, kSuffixJ);
    d += "    :precondition (or " + ci + " " + cj + ")\n";
    d += "    :effect (and\n      (when (and " + ci + " " + cj + ") (and" + effects(problem.twin_i, header, kSuffixI) +
         effects(problem.twin_j, header, kSuffixJ) + "))\n";
    std::string diverge;
    for (const std::string& lit : literals(problem.twin_j, header, kSuffixJ)) diverge += " (and " + ci + " " + negate(lit) + ")";
    for (const std::string& lit : literals(problem.twin_i, header, kSuffixI)) diverge += " (and " + cj + " " + negate(lit) + ")";
    d += "      (when (or" + diverge + ") (" + std::string(kFlagPredicate) + "))))\n";
  }
  d += ")\n";

  std::string p = "(define (problem " + instance.name + "-twins)\n  (:domain " + vocab.domain_name + "-twins)\n";
  p += "  (:objects";
  for (const auto& [name, sort] : instance.objects) {
    p += " " + name;
    if (vocab.typed()) p += " - " + sort;
  }
  p += ")\n  (:init";
  for (const GroundAtom& atom : problem.initial)
    for (std::string_view suffix : {kSuffixI, kSuffixJ}) p += " " + to_string(renamed(atom, suffix));
  p += ")\n  (:goal (or (" + std::string(kFlagPredicate) + ")";
  for (const GroundAtom& atom : ground_atoms(vocab, instance)) {
    std::string i = to_string(renamed(atom, kSuffixI));
    std::string j = to_string(renamed(atom, kSuffixJ));
    p += "\n    (and " + i + " (not " + j + ")) (and (not " + i + ") " + j + ")";
  }
  p += ")))\n";
  return {d, p};
}

GeneratedQuery generate_query(const Model& base, const PalTuple& pal, Mode mode_i, Mode mode_j,
                              const std::vector<State>& states, const ProblemInstance& instance,
                              const SearchLimits& limits) {
  auto [twin_i, twin_j] = build_twins(base, pal, mode_i, mode_j);
  GeneratedQuery result{std::nullopt, twin_i, twin_j, 0};
  if (states.empty()) return result;
  GroundedProblem grounded = ground(compile_ppo(twin_i, twin_j, states.front()), instance);
  for (const State& state : states) {
    ++result.states_tried;
    set_initial(grounded, state);
    std::optional<std::vector<std::size_t>> plan = solve(grounded, limits);
    if (!plan || plan->empty()) continue;
    PlanOutcomeQuery query{state, {}};
    for (std::size_t k : *plan) query.plan.push_back(grounded.actions[k].call);
    result.query = std::move(query);
    break;
  }
  return result;
}

}  // namespace aia
