#include "aia/aia.h"

#include <cstring>
#include <json.hpp>
#include <memory>
#include <string>

#include "aia/interrogation.hpp"
#include "aia/io.hpp"

using namespace aia;

struct aia_agent {
  std::unique_ptr<Agent> agent;
};

struct aia_run {
  std::shared_ptr<const Vocabulary> vocabulary;
  ProblemInstance instance;
  InterrogationState state;
  RunReport report;
  std::vector<TranscriptRecord> transcript;
  std::vector<Model> members;
  std::optional<Model> truth;
  std::size_t states = 0;
  bool converged = false;
  std::string status = "converged";
};

struct aia_evaluation {
  double accuracy = 0;
  double palm_accuracy = 0;
  bool equivalent = false;
  std::string json;
};

namespace {

thread_local std::string last_error;

aia_status fail(aia_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs f, translating exceptions into status codes.
template <class F>
aia_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return AIA_OK;
  } catch (const RepairFailure& e) {
    return fail(AIA_ERR_REPAIR, e.what());
  } catch (const ResourceLimit& e) {
    return fail(AIA_ERR_RESOURCE, e.what());
  } catch (const AgentInconsistency& e) {
    return fail(AIA_ERR_INTERNAL, e.what());
  } catch (const Error& e) {
    return fail(AIA_ERR_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(AIA_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(AIA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AIA_ERR_INTERNAL, "unknown error");
  }
}

char* copy_out(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.data(), text.size() + 1);
  return out;
}

template <class F>
aia_status emit(char** out, F&& produce) {
  if (!out) return fail(AIA_ERR_INPUT, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = copy_out(produce()); });
}

void require(const void* p, const char* what) {
  if (!p) throw Error(std::string("null ") + what);
}

nlohmann::json state_json(const State& state) {
  nlohmann::json out = nlohmann::json::array();
  for (const GroundAtom& atom : state) out.push_back(to_string(atom));
  return out;
}

nlohmann::json response_json(const QueryResponse& r) {
  return nlohmann::json{{"prefix_length", r.prefix_length}, {"final", state_json(r.final_state)}};
}

void materialize_members(aia_run& run, std::size_t limit) {
  run.members.clear();
  if (limit == 0) return;
  Model canonical = run.state.models.representative();
  run.members.push_back(canonical);
  for (Model& m : run.state.models.members(limit)) {
    if (run.members.size() >= limit) break;
    if (!(m == canonical)) run.members.push_back(std::move(m));
  }
}

}  // namespace

extern "C" {

const char* aia_version(void) { return "1.0.0"; }

const char* aia_last_error(void) { return last_error.c_str(); }

void aia_string_free(char* text) { std::free(text); }

aia_status aia_agent_open(const char* domain_text, const char* problem_text, aia_agent** out) {
  if (!out) return fail(AIA_ERR_INPUT, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    require(domain_text, "domain text");
    require(problem_text, "problem text");
    Model hidden = parse_domain(domain_text);
    ProblemInstance instance = parse_problem(problem_text, hidden.vocabulary());
    auto handle = std::make_unique<aia_agent>();
    handle->agent = std::make_unique<Agent>(std::move(hidden), std::move(instance));
    *out = handle.release();
  });
}

void aia_agent_close(aia_agent* agent) { delete agent; }

size_t aia_agent_query_count(const aia_agent* agent) { return agent ? agent->agent->distinct_queries() : 0; }

aia_status aia_agent_transcript(const aia_agent* agent, char** out_jsonl) {
  return emit(out_jsonl, [&] {
    require(agent, "agent");
    return io::write_transcript(agent->agent->transcript());
  });
}

aia_status aia_gen_states(const aia_agent* agent, size_t walk_length, size_t count, uint64_t seed, char** out_jsonl) {
  return emit(out_jsonl, [&] {
    require(agent, "agent");
    if (count == 0) throw Error("state count must be positive");
    return io::write_states(agent->agent->random_walk_states(walk_length, count, seed));
  });
}

void aia_run_options_init(aia_run_options* options) {
  if (!options) return;
  options->plan_cap = 10;
  options->node_cap = 2'000'000;
  options->consolidate = 1;
  options->truth_domain_text = nullptr;
  options->replay_transcript = nullptr;
  options->resume_checkpoint = nullptr;
  options->member_limit = 64;
}

aia_status aia_interrogate(aia_agent* agent, const char* states_jsonl, const aia_run_options* options, aia_run** out) {
  if (!out) return fail(AIA_ERR_INPUT, "null output pointer");
  *out = nullptr;
  aia_run_options defaults;
  aia_run_options_init(&defaults);
  const aia_run_options& opt = options ? *options : defaults;

  auto run = std::make_unique<aia_run>();
  std::unique_ptr<Interrogator> interrogator;
  std::unique_ptr<ReplayOracle> replay;
  std::size_t before = 0;

  aia_status setup = guarded([&] {
    require(agent, "agent");
    require(states_jsonl, "state pool");
    if (opt.plan_cap == 0 || opt.node_cap == 0) throw Error("plan and node caps must be positive");
    std::vector<State> states = io::read_states(states_jsonl);
    if (states.empty()) throw Error("the state pool is empty");
    run->vocabulary = agent->agent->vocabulary();
    run->instance = agent->agent->instance();
    run->states = states.size();
    if (opt.truth_domain_text) {
      run->truth = parse_domain(opt.truth_domain_text);
      require_same_vocabulary(run->truth->vocabulary(), *run->vocabulary);
    }
    RunConfig config;
    config.limits = SearchLimits{opt.plan_cap, opt.node_cap};
    config.consolidate = opt.consolidate != 0;
    config.truth = run->truth ? &*run->truth : nullptr;

    QueryOracle* oracle = agent->agent.get();
    if (opt.replay_transcript) {
      replay = std::make_unique<ReplayOracle>(io::read_transcript(opt.replay_transcript));
      oracle = replay.get();
    }
    before = agent->agent->transcript().size();
    if (opt.resume_checkpoint) {
      interrogator = std::make_unique<Interrogator>(*oracle, run->vocabulary, run->instance, std::move(states), config,
                                                    io::read_checkpoint(opt.resume_checkpoint, run->vocabulary));
    } else {
      interrogator =
          std::make_unique<Interrogator>(*oracle, run->vocabulary, run->instance, std::move(states), config);
    }
  });
  if (setup != AIA_OK) return setup;

  aia_status status = guarded([&] { interrogator->run(); });
  std::string message = last_error;

  run->state = interrogator->state();
  run->report = interrogator->report();
  run->converged = status == AIA_OK;
  if (!run->converged) run->status = status == AIA_ERR_REPAIR ? "repair-failure"
                                     : status == AIA_ERR_RESOURCE ? "resource-limit"
                                                                  : "error";
  if (replay) {
    run->transcript = replay->transcript();
  } else {
    std::vector<TranscriptRecord> all = agent->agent->transcript();
    for (std::size_t k = before; k < all.size(); ++k) {
      TranscriptRecord r = all[k];
      r.index = k - before + 1;
      run->transcript.push_back(std::move(r));
    }
  }
  aia_status members = guarded([&] { materialize_members(*run, opt.member_limit); });
  *out = run.release();
  if (status != AIA_OK) return fail(status, message);
  return members;
}

void aia_run_free(aia_run* run) { delete run; }

aia_status aia_run_get_stats(const aia_run* run, aia_run_stats* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "output");
    out->lattice_queries = run->state.lattice_queries;
    out->repair_queries = run->state.repair_queries;
    out->iterations = run->state.iterations;
    out->safety_violations = run->report.safety_violations;
    out->models = run->state.models.size();
    out->members = run->members.size();
    out->converged = run->converged ? 1 : 0;
  });
}

aia_status aia_run_learned_domain(const aia_run* run, size_t index, char** out) {
  return emit(out, [&] {
    require(run, "run");
    if (index >= run->members.size()) throw Error("learned domain index out of range");
    return emit_domain(run->members[index]);
  });
}

aia_status aia_run_report_jsonl(const aia_run* run, char** out) {
  return emit(out, [&] {
    require(run, "run");
    return io::write_report_jsonl(run->report, *run->vocabulary);
  });
}

aia_status aia_run_summary_json(const aia_run* run, char** out) {
  return emit(out, [&] {
    require(run, "run");
    io::Summary summary = io::summarize(run->state, run->report, *run->vocabulary, run->instance, run->states);
    summary.status = run->status;
    if (run->truth) {
      Model canonical = run->state.models.representative();
      summary.accuracy = accuracy(canonical, *run->truth);
      summary.palm_accuracy = palm_accuracy(canonical, *run->truth);
    }
    return io::write_summary(summary);
  });
}

aia_status aia_run_transcript_jsonl(const aia_run* run, char** out) {
  return emit(out, [&] {
    require(run, "run");
    return io::write_transcript(run->transcript);
  });
}

aia_status aia_run_model_set_json(const aia_run* run, char** out) {
  return emit(out, [&] {
    require(run, "run");
    return io::write_model_set(run->state.models);
  });
}

aia_status aia_run_checkpoint_json(const aia_run* run, char** out) {
  return emit(out, [&] {
    require(run, "run");
    return io::write_checkpoint(run->state);
  });
}

aia_status aia_evaluate(const char* learned_domain_text, const char* truth_domain_text, const char* problem_text,
                        const char* states_jsonl, size_t bound, aia_evaluation** out) {
  if (!out) return fail(AIA_ERR_INPUT, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    require(learned_domain_text, "learned domain");
    require(truth_domain_text, "true domain");
    require(problem_text, "problem");
    Model learned = parse_domain(learned_domain_text);
    Model truth = parse_domain(truth_domain_text);
    require_same_vocabulary(learned.vocabulary(), truth.vocabulary());
    ProblemInstance instance = parse_problem(problem_text, truth.vocabulary());
    std::vector<State> states = states_jsonl ? io::read_states(states_jsonl) : std::vector<State>{instance.init};

    auto result = std::make_unique<aia_evaluation>();
    result->accuracy = accuracy(learned, truth);
    result->palm_accuracy = palm_accuracy(learned, truth);
    EquivalenceResult eq = functionally_equivalent(learned, truth, states, instance, bound);
    result->equivalent = eq.equivalent;
    nlohmann::json j{{"accuracy", result->accuracy},
                     {"palm_accuracy", result->palm_accuracy},
                     {"equivalent", eq.equivalent},
                     {"bound", bound},
                     {"states", states.size()}};
    if (eq.witness) {
      nlohmann::json plan = nlohmann::json::array();
      for (const ActionCall& call : eq.witness->plan) plan.push_back(to_string(call));
      j["witness"] = {{"initial", state_json(eq.witness->initial)},
                      {"plan", plan},
                      {"learned", response_json(simulate(learned, eq.witness->initial, eq.witness->plan))},
                      {"truth", response_json(simulate(truth, eq.witness->initial, eq.witness->plan))}};
    }
    result->json = j.dump(2) + "\n";
    *out = result.release();
  });
}

double aia_evaluation_accuracy(const aia_evaluation* evaluation) { return evaluation ? evaluation->accuracy : 0.0; }

double aia_evaluation_palm_accuracy(const aia_evaluation* evaluation) {
  return evaluation ? evaluation->palm_accuracy : 0.0;
}

int aia_evaluation_equivalent(const aia_evaluation* evaluation) { return evaluation && evaluation->equivalent ? 1 : 0; }

aia_status aia_evaluation_json(const aia_evaluation* evaluation, char** out) {
  return emit(out, [&] {
    require(evaluation, "evaluation");
    return evaluation->json;
  });
}

void aia_evaluation_free(aia_evaluation* evaluation) { delete evaluation; }

}  // extern "C"
