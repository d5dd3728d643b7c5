#include <algorithm>
#include <functional>
#include <sstream>

#include "aia/pddl.hpp"

namespace aia {

std::string_view to_string(Location location) { return location == Location::pre ? "pre" : "eff"; }

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::positive:
      return "+";
    case Mode::negative:
      return "-";
    case Mode::none:
      break;
  }
  return "0";
}

Location location_from_string(std::string_view text) {
  if (text == "pre") return Location::pre;
  if (text == "eff") return Location::eff;
  throw Error("unknown location '" + std::string(text) + "'");
}

Mode mode_from_string(std::string_view text) {
  if (text == "+") return Mode::positive;
  if (text == "-") return Mode::negative;
  if (text == "0") return Mode::none;
  throw Error("unknown mode '" + std::string(text) + "'");
}

const PredicateSchema* Vocabulary::find_predicate(std::string_view name) const {
  for (const PredicateSchema& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

const ActionHeader* Vocabulary::find_action(std::string_view name) const {
  for (const ActionHeader& a : actions)
    if (a.name == name) return &a;
  return nullptr;
}

bool Vocabulary::is_subtype(std::string_view type, std::string_view of) const {
  if (of == kRootSort) return true;
  std::string current(type);
  for (std::size_t guard = 0; guard <= parent.size(); ++guard) {
    if (current == of) return true;
    auto it = parent.find(current);
    if (it == parent.end()) return false;
    current = it->second;
  }
  return false;
}

bool Vocabulary::sorts_overlap(std::string_view a, std::string_view b) const {
  return is_subtype(a, b) || is_subtype(b, a);
}

Model::Model(std::shared_ptr<const Vocabulary> vocabulary) : vocabulary_(std::move(vocabulary)) {}

std::optional<Mode> Model::mode_of(const PalTuple& pal) const {
  auto it = palms_.find(pal);
  if (it == palms_.end()) return std::nullopt;
  return it->second;
}

void Model::insert(const PalmTuple& palm) {
  const ActionHeader* header = vocabulary_ ? vocabulary_->find_action(palm.pal.action) : nullptr;
  if (!header) throw VocabularyMismatch("unknown action '" + palm.pal.action + "'");
  const PredicateSchema* schema = vocabulary_->find_predicate(palm.pal.atom.predicate);
  if (!schema) throw VocabularyMismatch("unknown predicate '" + palm.pal.atom.predicate + "'");
  if (schema->arity() != palm.pal.atom.args.size())
    throw VocabularyMismatch("arity mismatch for '" + schema->name + "'");
  for (std::size_t arg : palm.pal.atom.args) {
    if (arg >= header->arity())
      throw VocabularyMismatch("atom argument outside the parameters of '" + header->name + "'");
  }
  auto [it, inserted] = palms_.emplace(palm.pal, palm.mode);
  if (!inserted && it->second != palm.mode)
    throw VariantConflict("model already holds a variant of " + to_string(palm.pal, *vocabulary_));
}

Model Model::without_empty_modes() const {
  Model out(vocabulary_);
  for (const auto& [pal, mode] : palms_)
    if (mode != Mode::none) out.palms_.emplace(pal, mode);
  return out;
}

bool Model::operator==(const Model& other) const {
  if (palms_ != other.palms_) return false;
  if (vocabulary_ == other.vocabulary_) return true;
  if (!vocabulary_ || !other.vocabulary_) return false;
  return *vocabulary_ == *other.vocabulary_;
}

const std::string* ProblemInstance::sort_of(std::string_view object) const {
  for (const auto& [name, sort] : objects)
    if (name == object) return &sort;
  return nullptr;
}

bool is_reserved_identifier(std::string_view name) {
  return name.rfind("aia__", 0) == 0 || name.find("__aia") != std::string_view::npos;
}

std::string to_string(const GroundAtom& atom) {
  std::string out = "(" + atom.predicate;
  for (const std::string& obj : atom.objects) out += " " + obj;
  return out + ")";
}

std::string to_string(const ActionCall& call) {
  return to_string(GroundAtom{call.action, call.args});
}

std::string to_string(const LiftedAtom& atom, const ActionHeader& header) {
  std::string out = "(" + atom.predicate;
  for (std::size_t arg : atom.args)
    out += " ?" + (arg < header.params.size() ? header.params[arg] : "v" + std::to_string(arg));
  return out + ")";
}

std::string to_string(const PalTuple& pal, const Vocabulary& vocabulary) {
  const ActionHeader* header = vocabulary.find_action(pal.action);
  std::string atom = header ? to_string(pal.atom, *header) : pal.atom.predicate;
  return "<" + atom + ", " + pal.action + ", " + std::string(to_string(pal.location)) + ">";
}

std::string to_string(const PalmTuple& palm, const Vocabulary& vocabulary) {
  std::string out = to_string(palm.pal, vocabulary);
  out.pop_back();
  return out + ", " + std::string(to_string(palm.mode)) + ">";
}

namespace {

void emit_typed(std::ostringstream& os, const std::vector<std::string>& names,
                const std::vector<std::string>& sorts, bool typed, const char* prefix) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (k) os << ' ';
    os << prefix << names[k];
    if (typed) os << " - " << sorts[k];
  }
}

void emit_literals(std::ostringstream& os, const std::vector<std::pair<LiftedAtom, Mode>>& lits,
                   const ActionHeader& header) {
  os << "(and";
  for (const auto& [atom, mode] : lits) {
    if (mode == Mode::positive)
      os << ' ' << to_string(atom, header);
    else
      os << " (not " << to_string(atom, header) << ')';
  }
  os << ')';
}

}  // namespace

std::string emit_domain(const Model& model) {
  const Vocabulary& vocab = model.vocabulary();
  bool negative = false;
  for (const auto& [pal, mode] : model.palms())
    if (pal.location == Location::pre && mode == Mode::negative) negative = true;

  std::ostringstream os;
  os << "(define (domain " << vocab.domain_name << ")\n";
  os << "  (:requirements :strips" << (vocab.typed() ? " :typing" : "")
     << (negative ? " :negative-preconditions" : "") << ")\n";
  if (vocab.typed()) {
    os << "  (:types";
    for (const std::string& type : vocab.types) os << ' ' << type << " - " << vocab.parent.at(type);
    os << ")\n";
  }
  os << "  (:predicates";
  for (const PredicateSchema& p : vocab.predicates) {
    os << "\n    (" << p.name;
    std::vector<std::string> vars;
    for (std::size_t k = 0; k < p.arity(); ++k) vars.push_back("x" + std::to_string(k + 1));
    if (!vars.empty()) os << ' ';
    emit_typed(os, vars, p.sorts, vocab.typed(), "?");
    os << ')';
  }
  os << ")\n";

  std::vector<const ActionHeader*> actions;
  for (const ActionHeader& a : vocab.actions) actions.push_back(&a);
  for (const ActionHeader* header : actions) {
    std::vector<std::pair<LiftedAtom, Mode>> pre;
    std::vector<std::pair<LiftedAtom, Mode>> eff;
    for (const auto& [pal, mode] : model.palms()) {
      if (pal.action != header->name || mode == Mode::none) continue;
      (pal.location == Location::pre ? pre : eff).emplace_back(pal.atom, mode);
    }
    os << "\n  (:action " << header->name << "\n    :parameters (";
    emit_typed(os, header->params, header->sorts, vocab.typed(), "?");
    os << ")\n    :precondition ";
    emit_literals(os, pre, *header);
    os << "\n    :effect ";
    emit_literals(os, eff, *header);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string emit_problem(const ProblemInstance& instance, const Vocabulary& vocabulary) {
  std::ostringstream os;
  os << "(define (problem " << (instance.name.empty() ? "instance" : instance.name) << ")\n";
  os << "  (:domain " << vocabulary.domain_name << ")\n  (:objects";
  for (const auto& [name, sort] : instance.objects) {
    os << ' ' << name;
    if (vocabulary.typed()) os << " - " << sort;
  }
  os << ")\n  (:init";
  for (const GroundAtom& atom : instance.init) os << "\n    " << to_string(atom);
  os << ")\n  (:goal (and)))\n";
  return os.str();
}

std::vector<LiftedAtom> instantiate_predicates(const Vocabulary& vocabulary, const ActionHeader& header) {
  std::vector<LiftedAtom> out;
  for (const PredicateSchema& schema : vocabulary.predicates) {
    if (schema.arity() > header.arity()) continue;
    std::vector<std::size_t> args;
    std::vector<bool> used(header.arity(), false);
    std::function<void()> extend = [&] {
      if (args.size() == schema.arity()) {
        out.push_back(LiftedAtom{schema.name, args});
        return;
      }
      std::size_t slot = args.size();
      for (std::size_t p = 0; p < header.arity(); ++p) {
        if (used[p] || !vocabulary.sorts_overlap(header.sorts[p], schema.sorts[slot])) continue;
        used[p] = true;
        args.push_back(p);
        extend();
        args.pop_back();
        used[p] = false;
      }
    };
    extend();
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::map<std::string, std::vector<LiftedAtom>> instantiate_predicates(const Vocabulary& vocabulary) {
  std::map<std::string, std::vector<LiftedAtom>> out;
  for (const ActionHeader& header : vocabulary.actions)
    out[header.name] = instantiate_predicates(vocabulary, header);
  return out;
}

std::size_t count_instantiated_predicates(const Vocabulary& vocabulary) {
  std::set<LiftedAtom> positional;
  for (const ActionHeader& header : vocabulary.actions)
    for (LiftedAtom& atom : instantiate_predicates(vocabulary, header)) positional.insert(std::move(atom));
  return positional.size();
}

std::vector<PalTuple> all_pal_tuples(const Vocabulary& vocabulary) {
  std::vector<PalTuple> out;
  for (const ActionHeader& header : vocabulary.actions) {
    std::vector<LiftedAtom> atoms = instantiate_predicates(vocabulary, header);
    for (Location location : {Location::pre, Location::eff})
      for (const LiftedAtom& atom : atoms) out.push_back(PalTuple{header.name, location, atom});
  }
  return out;
}

GroundAtom ground_atom(const LiftedAtom& atom, std::span<const std::string> objects) {
  GroundAtom out{atom.predicate, {}};
  out.objects.reserve(atom.args.size());
  for (std::size_t arg : atom.args) out.objects.push_back(objects[arg]);
  return out;
}

GroundAction ground_action(const Model& model, const ActionHeader& header,
                           std::span<const std::string> objects) {
  if (objects.size() != header.arity())
    throw MalformedQuery("action '" + header.name + "' expects " + std::to_string(header.arity()) +
                         " objects, got " + std::to_string(objects.size()));
  for (std::size_t a = 0; a < objects.size(); ++a)
    for (std::size_t b = a + 1; b < objects.size(); ++b)
      if (objects[a] == objects[b])
        throw MalformedQuery("repeated object '" + objects[a] + "' in call of '" + header.name + "'");
  GroundAction out;
  out.call = ActionCall{header.name, std::vector<std::string>(objects.begin(), objects.end())};
  auto lo = model.palms().lower_bound(PalTuple{header.name, Location::pre, {}});
  for (auto it = lo; it != model.palms().end() && it->first.action == header.name; ++it) {
    const auto& [pal, mode] = *it;
    if (mode == Mode::none) continue;
    GroundAtom atom = ground_atom(pal.atom, objects);
    if (pal.location == Location::pre)
      (mode == Mode::positive ? out.pre_pos : out.pre_neg).push_back(std::move(atom));
    else
      (mode == Mode::positive ? out.add : out.del).push_back(std::move(atom));
  }
  return out;
}

GroundAction ground_action(const Model& model, const ActionCall& call) {
  const ActionHeader* header = model.vocabulary().find_action(call.action);
  if (!header) throw MalformedQuery("unknown action '" + call.action + "'");
  return ground_action(model, *header, call.args);
}

bool applicable(const GroundAction& action, const State& state) {
  for (const GroundAtom& atom : action.pre_pos)
    if (!state.count(atom)) return false;
  for (const GroundAtom& atom : action.pre_neg)
    if (state.count(atom)) return false;
  return true;
}

State apply_effects(const GroundAction& action, const State& state) {
  State next = state;
  for (const GroundAtom& atom : action.del) next.erase(atom);
  for (const GroundAtom& atom : action.add) next.insert(atom);
  return next;
}

QueryResponse simulate(const Model& model, const State& initial, const Plan& plan) {
  QueryResponse response{0, initial};
  for (const ActionCall& call : plan) {
    GroundAction action = ground_action(model, call);
    if (!applicable(action, response.final_state)) break;
    response.final_state = apply_effects(action, response.final_state);
    ++response.prefix_length;
  }
  return response;
}

namespace {

// Distinct-object tuples where object k fits sorts[k].
void enumerate_tuples(const Vocabulary& vocabulary, const ProblemInstance& instance,
                      const std::vector<std::string>& sorts,
                      const std::function<void(const std::vector<std::string>&)>& emit) {
  std::vector<std::string> tuple;
  std::vector<bool> used(instance.objects.size(), false);
  std::function<void()> extend = [&] {
    if (tuple.size() == sorts.size()) {
      emit(tuple);
      return;
    }
    const std::string& sort = sorts[tuple.size()];
    for (std::size_t o = 0; o < instance.objects.size(); ++o) {
      if (used[o] || !vocabulary.is_subtype(instance.objects[o].second, sort)) continue;
      used[o] = true;
      tuple.push_back(instance.objects[o].first);
      extend();
      tuple.pop_back();
      used[o] = false;
    }
  };
  extend();
}

}  // namespace

std::vector<ActionCall> ground_calls(const Vocabulary& vocabulary, const ProblemInstance& instance) {
  std::vector<ActionCall> out;
  for (const ActionHeader& header : vocabulary.actions)
    enumerate_tuples(vocabulary, instance, header.sorts,
                     [&](const std::vector<std::string>& tuple) { out.push_back({header.name, tuple}); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GroundAtom> ground_atoms(const Vocabulary& vocabulary, const ProblemInstance& instance) {
  std::vector<GroundAtom> out;
  for (const PredicateSchema& schema : vocabulary.predicates)
    enumerate_tuples(vocabulary, instance, schema.sorts,
                     [&](const std::vector<std::string>& tuple) { out.push_back({schema.name, tuple}); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace aia
