// Command-line front end; talks to the library only through the C interface.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "aia/aia.h"

namespace fs = std::filesystem;

namespace {

int log_level() {
  const char* env = std::getenv("AIA_LOG");
  if (!env) return 1;
  return std::atoi(env);
}

void log(int level, const std::string& message) {
  if (log_level() >= level) std::cerr << "aia: " << message << "\n";
}

struct InputError {
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read " + path};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{"cannot write " + path.string()};
  out << text;
}

// Takes ownership of a library string.
std::string take(char* text) {
  std::string out = text ? text : "";
  aia_string_free(text);
  return out;
}

int report_failure(aia_status status) {
  std::cerr << "aia: error: " << aia_last_error() << "\n";
  return static_cast<int>(status);
}

struct AgentHandle {
  aia_agent* agent = nullptr;
  ~AgentHandle() { aia_agent_close(agent); }
};

struct Common {
  std::string domain;
  std::string problem;
  std::uint64_t seed = 1;
  std::size_t max_states = 60;
  std::size_t walk_length = 40;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--domain", c.domain, "Domain file of the hidden model")->required()->check(CLI::ExistingFile);
  cmd->add_option("--problem", c.problem, "Problem file providing objects and the initial state")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Seed for random-walk state generation");
  cmd->add_option("--max-states", c.max_states, "State pool size")->check(CLI::PositiveNumber);
  cmd->add_option("--walk-length", c.walk_length, "Random walk length")->check(CLI::PositiveNumber);
}

int open_agent(const Common& c, AgentHandle& handle) {
  aia_status status = aia_agent_open(slurp(c.domain).c_str(), slurp(c.problem).c_str(), &handle.agent);
  return status == AIA_OK ? 0 : report_failure(status);
}

int cmd_gen_states(const Common& c, const std::string& out) {
  AgentHandle handle;
  if (int rc = open_agent(c, handle)) return rc;
  char* text = nullptr;
  aia_status status = aia_gen_states(handle.agent, c.walk_length, c.max_states, c.seed, &text);
  if (status != AIA_OK) return report_failure(status);
  std::string states = take(text);
  if (out.empty())
    std::cout << states;
  else
    write_file(out, states);
  return 0;
}

struct InterrogateArgs {
  std::string states;
  std::size_t plan_cap = 10;
  std::size_t node_cap = 2'000'000;
  std::string out = "aia-out";
  std::string report;
  std::string replay;
  std::string resume;
  std::string truth;
  std::size_t member_limit = 64;
};

int cmd_interrogate(const Common& c, const InterrogateArgs& a) {
  AgentHandle handle;
  if (int rc = open_agent(c, handle)) return rc;

  std::string states;
  if (!a.states.empty()) {
    states = slurp(a.states);
  } else {
    char* text = nullptr;
    aia_status status = aia_gen_states(handle.agent, c.walk_length, c.max_states, c.seed, &text);
    if (status != AIA_OK) return report_failure(status);
    states = take(text);
  }
  std::string replay = a.replay.empty() ? "" : slurp(a.replay);
  std::string resume = a.resume.empty() ? "" : slurp(a.resume);
  std::string truth = a.truth.empty() ? "" : slurp(a.truth);

  aia_run_options options;
  aia_run_options_init(&options);
  options.plan_cap = a.plan_cap;
  options.node_cap = a.node_cap;
  options.member_limit = a.member_limit;
  if (!replay.empty()) options.replay_transcript = replay.c_str();
  if (!resume.empty()) options.resume_checkpoint = resume.c_str();
  if (!truth.empty()) options.truth_domain_text = truth.c_str();

  log(1, "interrogating " + c.domain);
  aia_run* run = nullptr;
  aia_status status = aia_interrogate(handle.agent, states.c_str(), &options, &run);
  if (!run) return report_failure(status);
  std::string message = aia_last_error();

  fs::create_directories(a.out);
  const fs::path out(a.out);
  auto fetch = [&](aia_status (*get)(const aia_run*, char**)) {
    char* text = nullptr;
    if (get(run, &text) != AIA_OK) throw InputError{aia_last_error()};
    return take(text);
  };
  write_file(out / "states.jsonl", states);
  write_file(out / "transcript.jsonl", fetch(aia_run_transcript_jsonl));
  write_file(out / "models.json", fetch(aia_run_model_set_json));
  write_file(out / "checkpoint.json", fetch(aia_run_checkpoint_json));
  if (a.report.empty() || a.report == "jsonl") write_file(out / "report.jsonl", fetch(aia_run_report_jsonl));
  std::string summary = fetch(aia_run_summary_json);
  if (a.report.empty() || a.report == "summary") write_file(out / "summary.json", summary);

  aia_run_stats stats{};
  aia_run_get_stats(run, &stats);
  if (stats.members > 0) {
    fs::create_directories(out / "learned");
    for (std::size_t k = 0; k < stats.members; ++k) {
      char* text = nullptr;
      if (aia_run_learned_domain(run, k, &text) != AIA_OK) throw InputError{aia_last_error()};
      std::string name = k == 0 ? "domain.pddl" : "member_" + std::to_string(k) + ".pddl";
      write_file(k == 0 ? out / "learned_domain.pddl" : out / "learned" / name, take(text));
    }
  }
  aia_run_free(run);

  log(1, "queries: " + std::to_string(stats.lattice_queries) + " lattice, " + std::to_string(stats.repair_queries) +
             " repair; " + std::to_string(stats.models) + " model(s) retained");
  if (log_level() >= 2) std::cerr << summary;
  if (status != AIA_OK) {
    std::cerr << "aia: error: " << message << "\n";
    return static_cast<int>(status);
  }
  return 0;
}

int cmd_evaluate(const std::string& learned, const Common& c, const std::string& states_path, std::size_t bound) {
  std::string states = states_path.empty() ? "" : slurp(states_path);
  aia_evaluation* evaluation = nullptr;
  aia_status status = aia_evaluate(slurp(learned).c_str(), slurp(c.domain).c_str(), slurp(c.problem).c_str(),
                                   states.empty() ? nullptr : states.c_str(), bound, &evaluation);
  if (status != AIA_OK) return report_failure(status);
  char* text = nullptr;
  status = aia_evaluation_json(evaluation, &text);
  aia_evaluation_free(evaluation);
  if (status != AIA_OK) return report_failure(status);
  std::cout << take(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learns a symbolic model of a black-box planning agent by asking it plan-outcome queries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aia_version()));

  Common common;
  InterrogateArgs args;
  auto* interrogate = app.add_subcommand("interrogate", "Learn the agent's model");
  add_common(interrogate, common);
  interrogate->add_option("--states", args.states, "State pool file (JSON lines); generated when absent")
      ->check(CLI::ExistingFile);
  interrogate->add_option("--plan-cap", args.plan_cap, "Maximum length of a query plan")->check(CLI::PositiveNumber);
  interrogate->add_option("--node-cap", args.node_cap, "Maximum search states per planner call")
      ->check(CLI::PositiveNumber);
  interrogate->add_option("--out", args.out, "Output directory");
  interrogate->add_option("--report", args.report, "Report format; both are written by default")
      ->check(CLI::IsMember({"jsonl", "summary"}));
  interrogate->add_option("--replay", args.replay, "Answer from a recorded transcript")->check(CLI::ExistingFile);
  interrogate->add_option("--resume", args.resume, "Continue from a checkpoint")->check(CLI::ExistingFile);
  interrogate->add_option("--truth", args.truth, "True domain for accuracy accounting")->check(CLI::ExistingFile);
  interrogate->add_option("--member-limit", args.member_limit, "Learned domains written per run");

  Common eval_common;
  std::string learned;
  std::string eval_states;
  std::size_t bound = 2;
  auto* evaluate = app.add_subcommand("evaluate", "Compare a learned domain with the true one");
  evaluate->add_option("--learned", learned, "Learned domain file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--domain", eval_common.domain, "True domain file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--problem", eval_common.problem, "Problem file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--states", eval_states, "Probe states (JSON lines); the initial state when absent")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--bound", bound, "Plan length bound");

  Common gen_common;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-states", "Generate a state pool by random walks");
  add_common(gen, gen_common);
  gen->add_option("--out", gen_out, "Output file; stdout when absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : AIA_ERR_INPUT;
  }

  try {
    if (*interrogate) return cmd_interrogate(common, args);
    if (*evaluate) return cmd_evaluate(learned, eval_common, eval_states, bound);
    if (*gen) return cmd_gen_states(gen_common, gen_out);
  } catch (const InputError& e) {
    std::cerr << "aia: error: " << e.message << "\n";
    return AIA_ERR_INPUT;
  } catch (const std::exception& e) {
    std::cerr << "aia: error: " << e.what() << "\n";
    return AIA_ERR_INTERNAL;
  }
  return 0;
}
