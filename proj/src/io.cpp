#include "aia/io.hpp"

#include <json.hpp>
#include <sstream>

namespace aia::io {

using nlohmann::json;

namespace {

json state_json(const State& state) {
  json out = json::array();
  for (const GroundAtom& atom : state) out.push_back(to_string(atom));
  return out;
}

State state_from(const json& j) {
  State state;
  for (const json& atom : j) state.insert(parse_ground_atom(atom.get<std::string>()));
  return state;
}

json plan_json(const Plan& plan) {
  json out = json::array();
  for (const ActionCall& call : plan) out.push_back(to_string(call));
  return out;
}

Plan plan_from(const json& j) {
  Plan plan;
  for (const json& call : j) plan.push_back(parse_action_call(call.get<std::string>()));
  return plan;
}

std::vector<json> lines(std::string_view text) {
  std::vector<json> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), number, 1);
    }
  }
  return out;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

json pal_json(const PalTuple& pal) {
  return json{{"action", pal.action},
              {"location", std::string(to_string(pal.location))},
              {"predicate", pal.atom.predicate},
              {"args", pal.atom.args}};
}

PalTuple pal_from(const json& j) {
  return PalTuple{j.at("action").get<std::string>(), location_from_string(j.at("location").get<std::string>()),
                  LiftedAtom{j.at("predicate").get<std::string>(), j.at("args").get<std::vector<std::size_t>>()}};
}

json modes_json(const std::vector<Mode>& modes) {
  json out = json::array();
  for (Mode m : modes) out.push_back(std::string(to_string(m)));
  return out;
}

std::vector<Mode> modes_from(const json& j) {
  std::vector<Mode> out;
  for (const json& m : j) out.push_back(mode_from_string(m.get<std::string>()));
  return out;
}

json query_json(const PlanOutcomeQuery& query) {
  return json{{"initial", state_json(query.initial)}, {"plan", plan_json(query.plan)}};
}

// Twin predictions carry the search guard; it is not part of the vocabulary.
json response_json(const QueryResponse& response) {
  json final = json::array();
  for (const GroundAtom& atom : response.final_state)
    if (!is_reserved_identifier(atom.predicate)) final.push_back(to_string(atom));
  return json{{"prefix_length", response.prefix_length}, {"final", final}};
}

json model_set_json(const ModelSet& models) {
  json tuples = json::array();
  for (const auto& [pal, modes] : models.alternatives()) {
    json entry = pal_json(pal);
    entry["modes"] = modes_json(modes);
    tuples.push_back(std::move(entry));
  }
  return json{{"domain", models.vocabulary().domain_name}, {"size", models.size()}, {"tuples", tuples}};
}

ModelSet model_set_from(const json& j, std::shared_ptr<const Vocabulary> vocabulary) {
  if (j.at("domain").get<std::string>() != vocabulary->domain_name)
    throw VocabularyMismatch("model set belongs to domain '" + j.at("domain").get<std::string>() + "'");
  ModelSet models(vocabulary);
  const std::vector<PalTuple> gamma = all_pal_tuples(*vocabulary);
  for (const json& entry : j.at("tuples")) {
    PalTuple pal = pal_from(entry);
    if (std::find(gamma.begin(), gamma.end(), pal) == gamma.end())
      throw VocabularyMismatch("pal tuple outside the vocabulary: " + pal.action + " " + pal.atom.predicate);
    models.refine(pal, modes_from(entry.at("modes")));
  }
  return models;
}

}  // namespace

std::string write_states(const std::vector<State>& states) {
  std::string out;
  for (const State& state : states) out += state_json(state).dump() + "\n";
  return out;
}

std::vector<State> read_states(std::string_view text) {
  std::vector<State> out;
  for (const json& j : lines(text)) {
    if (!j.is_array()) throw ParseError("state pool lines must be JSON arrays", out.size() + 1, 1);
    out.push_back(state_from(j));
  }
  return out;
}

std::string write_transcript(const std::vector<TranscriptRecord>& records) {
  std::string out;
  for (const TranscriptRecord& r : records) {
    json j{{"index", r.index},
           {"kind", std::string(to_string(r.kind))},
           {"initial", state_json(r.query.initial)},
           {"plan", plan_json(r.query.plan)},
           {"prefix_length", r.response.prefix_length},
           {"final", state_json(r.response.final_state)}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<TranscriptRecord> read_transcript(std::string_view text) {
  std::vector<TranscriptRecord> out;
  for (const json& j : lines(text)) {
    try {
      TranscriptRecord r;
      r.index = j.at("index").get<std::size_t>();
      r.kind = query_kind_from_string(j.at("kind").get<std::string>());
      r.query.initial = state_from(j.at("initial"));
      r.query.plan = plan_from(j.at("plan"));
      r.response.prefix_length = j.at("prefix_length").get<std::size_t>();
      r.response.final_state = state_from(j.at("final"));
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), out.size() + 1, 1);
    }
  }
  return out;
}

std::string write_report_jsonl(const RunReport& report, const Vocabulary& vocabulary) {
  std::string out;
  for (const IterationRecord& it : report.iterations) {
    json pairs = json::array();
    for (const PairRecord& p : it.pairs) {
      json pj{{"modes", modes_json({p.mode_i, p.mode_j})}, {"states_tried", p.states_tried}};
      if (p.query) {
        pj["query"] = query_json(*p.query);
        pj["agent"] = response_json(*p.agent);
        pj["fresh"] = p.fresh;
        pj["seconds"] = p.seconds;
        if (p.filter.repair) {
          pj["repair"] = true;
        } else {
          pj["response_i"] = response_json(p.filter.response_i);
          pj["response_j"] = response_json(p.filter.response_j);
          pj["consistent"] = json::array({p.filter.consistent_i, p.filter.consistent_j});
          pj["pruned"] = modes_json(p.filter.pruned);
        }
      } else {
        pj["indistinguishable"] = true;
      }
      pairs.push_back(std::move(pj));
    }
    json repaired = json::array();
    for (const PalmTuple& palm : it.repaired) repaired.push_back(to_string(palm, vocabulary));
    json j{{"iteration", it.index},
           {"pal", to_string(it.pal, vocabulary)},
           {"consolidation", it.consolidation},
           {"pairs", pairs},
           {"retained", modes_json(it.retained)},
           {"repaired", repaired},
           {"repair_probes", it.repair_probes},
           {"stalled", it.stalled},
           {"lattice_queries", it.lattice_queries},
           {"repair_queries", it.repair_queries},
           {"resolved", it.resolved},
           {"seconds", it.seconds}};
    if (it.accuracy) j["accuracy"] = *it.accuracy;
    out += j.dump() + "\n";
  }
  return out;
}

Summary summarize(const InterrogationState& state, const RunReport& report, const Vocabulary& vocabulary,
                  const ProblemInstance& instance, std::size_t states) {
  Summary s;
  s.domain = vocabulary.domain_name;
  s.problem = instance.name;
  s.instantiated_predicates = report.instantiated_predicates;
  s.actions = report.actions;
  s.pal_tuples = report.pal_tuples;
  s.lattice_queries = state.lattice_queries;
  s.repair_queries = state.repair_queries;
  s.states = states;
  s.models = state.models.size();
  s.safety_violations = report.safety_violations;
  const auto& t = report.query_seconds;
  if (!t.empty()) {
    double sum = 0;
    for (double x : t) sum += x;
    s.mean_query_seconds = sum / static_cast<double>(t.size());
    double sq = 0;
    for (double x : t) sq += (x - s.mean_query_seconds) * (x - s.mean_query_seconds);
    s.variance_query_seconds = sq / static_cast<double>(t.size());
  }
  if (!report.iterations.empty() && report.iterations.back().accuracy) s.accuracy = report.iterations.back().accuracy;
  return s;
}

std::string write_summary(const Summary& s) {
  json j{{"domain", s.domain},
         {"problem", s.problem},
         {"instantiated_predicates", s.instantiated_predicates},
         {"actions", s.actions},
         {"pal_tuples", s.pal_tuples},
         {"queries", s.lattice_queries + s.repair_queries},
         {"lattice_queries", s.lattice_queries},
         {"repair_queries", s.repair_queries},
         {"states", s.states},
         {"models", s.models},
         {"query_seconds_mean", s.mean_query_seconds},
         {"query_seconds_variance", s.variance_query_seconds},
         {"safety_violations", s.safety_violations},
         {"status", s.status}};
  if (s.accuracy) j["accuracy"] = *s.accuracy;
  if (s.palm_accuracy) j["palm_accuracy"] = *s.palm_accuracy;
  return j.dump(2) + "\n";
}

std::string write_model_set(const ModelSet& models) { return model_set_json(models).dump(2) + "\n"; }

ModelSet read_model_set(std::string_view text, std::shared_ptr<const Vocabulary> vocabulary) {
  try {
    return model_set_from(parse_document(text), std::move(vocabulary));
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

std::string write_checkpoint(const InterrogationState& state) {
  json ordering = json::array();
  for (const PalTuple& pal : state.ordering.queue()) ordering.push_back(pal_json(pal));
  json excluded = json::array();
  for (const auto& [pal, modes] : state.excluded) {
    json entry = pal_json(pal);
    entry["modes"] = modes_json(std::vector<Mode>(modes.begin(), modes.end()));
    excluded.push_back(std::move(entry));
  }
  json pruned = json::array();
  for (const PalmTuple& palm : state.pruned) {
    json entry = pal_json(palm.pal);
    entry["mode"] = std::string(to_string(palm.mode));
    pruned.push_back(std::move(entry));
  }
  json j{{"ordering", ordering},
         {"models", model_set_json(state.models)},
         {"excluded", excluded},
         {"pruned", pruned},
         {"resolved", state.resolved},
         {"lattice_queries", state.lattice_queries},
         {"repair_queries", state.repair_queries},
         {"iterations", state.iterations},
         {"consolidated", state.consolidated}};
  return j.dump(2) + "\n";
}

InterrogationState read_checkpoint(std::string_view text, std::shared_ptr<const Vocabulary> vocabulary) {
  try {
    json j = parse_document(text);
    InterrogationState state;
    std::vector<PalTuple> ordering;
    for (const json& entry : j.at("ordering")) ordering.push_back(pal_from(entry));
    state.ordering = PalOrdering(std::move(ordering));
    state.models = model_set_from(j.at("models"), vocabulary);
    for (const json& entry : j.at("excluded")) {
      std::vector<Mode> modes = modes_from(entry.at("modes"));
      state.excluded[pal_from(entry)].insert(modes.begin(), modes.end());
    }
    for (const json& entry : j.at("pruned"))
      state.pruned.insert(PalmTuple{pal_from(entry), mode_from_string(entry.at("mode").get<std::string>())});
    state.resolved = j.at("resolved").get<std::size_t>();
    state.lattice_queries = j.at("lattice_queries").get<std::size_t>();
    state.repair_queries = j.at("repair_queries").get<std::size_t>();
    state.iterations = j.at("iterations").get<std::size_t>();
    state.consolidated = j.at("consolidated").get<bool>();
    return state;
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

}  // namespace aia::io
