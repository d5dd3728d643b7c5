#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "aia/aia.h"

#ifndef AIA_DATA_DIR
#define AIA_DATA_DIR "data"
#endif

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string data(const char* domain, const char* file) {
  return read(std::string(AIA_DATA_DIR) + "/" + domain + "/" + file);
}

std::string take(char* text) {
  std::string out = text ? text : "";
  aia_string_free(text);
  return out;
}

struct Agent {
  aia_agent* handle = nullptr;
  explicit Agent(const char* name) {
    REQUIRE(aia_agent_open(data(name, "domain.pddl").c_str(), data(name, "problem.pddl").c_str(), &handle) == AIA_OK);
  }
  ~Agent() { aia_agent_close(handle); }
};

}  // namespace

TEST_CASE("version") { CHECK(std::strlen(aia_version()) > 0); }

TEST_CASE("bad input reports an input error") {
  aia_agent* agent = nullptr;
  CHECK(aia_agent_open("(define (domain", "", &agent) == AIA_ERR_INPUT);
  CHECK(agent == nullptr);
  CHECK(std::strlen(aia_last_error()) > 0);
  CHECK(aia_agent_open(nullptr, nullptr, &agent) == AIA_ERR_INPUT);
}

TEST_CASE("interrogation through the C interface") {
  Agent agent("gripper");
  char* states = nullptr;
  REQUIRE(aia_gen_states(agent.handle, 40, 60, 1, &states) == AIA_OK);
  std::string pool = take(states);
  CHECK(!pool.empty());

  aia_run_options options;
  aia_run_options_init(&options);
  std::string truth = data("gripper", "domain.pddl");
  options.truth_domain_text = truth.c_str();
  aia_run* run = nullptr;
  REQUIRE(aia_interrogate(agent.handle, pool.c_str(), &options, &run) == AIA_OK);

  aia_run_stats stats{};
  REQUIRE(aia_run_get_stats(run, &stats) == AIA_OK);
  CHECK(stats.converged);
  CHECK(stats.safety_violations == 0);
  CHECK(stats.lattice_queries <= 30);
  CHECK(stats.members >= 1);
  CHECK(aia_agent_query_count(agent.handle) == stats.lattice_queries + stats.repair_queries);

  char* text = nullptr;
  REQUIRE(aia_run_learned_domain(run, 0, &text) == AIA_OK);
  std::string learned = take(text);
  CHECK(aia_run_learned_domain(run, stats.members, &text) == AIA_ERR_INPUT);

  REQUIRE(aia_run_summary_json(run, &text) == AIA_OK);
  CHECK(take(text).find("\"lattice_queries\"") != std::string::npos);
  REQUIRE(aia_run_transcript_jsonl(run, &text) == AIA_OK);
  std::string transcript = take(text);
  REQUIRE(aia_run_checkpoint_json(run, &text) == AIA_OK);
  take(text);
  REQUIRE(aia_run_model_set_json(run, &text) == AIA_OK);
  std::string models = take(text);
  aia_run_free(run);

  aia_evaluation* evaluation = nullptr;
  REQUIRE(aia_evaluate(learned.c_str(), truth.c_str(), data("gripper", "problem.pddl").c_str(), pool.c_str(), 2,
                       &evaluation) == AIA_OK);
  CHECK(aia_evaluation_equivalent(evaluation));
  CHECK(aia_evaluation_accuracy(evaluation) == 1.0);
  CHECK(aia_evaluation_palm_accuracy(evaluation) == 1.0);
  aia_evaluation_free(evaluation);

  // replaying the transcript asks the agent nothing and learns the same set
  Agent fresh("gripper");
  aia_run_options_init(&options);
  options.replay_transcript = transcript.c_str();
  REQUIRE(aia_interrogate(fresh.handle, pool.c_str(), &options, &run) == AIA_OK);
  REQUIRE(aia_run_model_set_json(run, &text) == AIA_OK);
  CHECK(take(text) == models);
  REQUIRE(aia_run_transcript_jsonl(run, &text) == AIA_OK);
  CHECK(take(text) == transcript);
  aia_run_free(run);
  CHECK(aia_agent_query_count(fresh.handle) == 0);
}

TEST_CASE("a replay missing answers fails but still returns the partial run") {
  Agent agent("gripper");
  char* states = nullptr;
  REQUIRE(aia_gen_states(agent.handle, 40, 60, 1, &states) == AIA_OK);
  std::string pool = take(states);
  aia_run_options options;
  aia_run_options_init(&options);
  options.replay_transcript = "";
  aia_run* run = nullptr;
  aia_status status = aia_interrogate(agent.handle, pool.c_str(), &options, &run);
  CHECK(status != AIA_OK);
  if (run) {
    aia_run_stats stats{};
    CHECK(aia_run_get_stats(run, &stats) == AIA_OK);
    CHECK_FALSE(stats.converged);
    aia_run_free(run);
  }
}

TEST_CASE("a pool that cannot explain a failure gives a repair error") {
  Agent agent("blocksworld");
  // a single state from which nothing but the initial configuration is known
  std::string pool = "[]\n";
  aia_run_options options;
  aia_run_options_init(&options);
  aia_run* run = nullptr;
  aia_status status = aia_interrogate(agent.handle, pool.c_str(), &options, &run);
  CHECK(status == AIA_ERR_REPAIR);
  CHECK(run != nullptr);
  aia_run_free(run);
}

TEST_CASE("null handles are tolerated") {
  aia_run_free(nullptr);
  aia_agent_close(nullptr);
  aia_evaluation_free(nullptr);
  aia_string_free(nullptr);
  aia_run_stats stats{};
  CHECK(aia_run_get_stats(nullptr, &stats) == AIA_ERR_INPUT);
}
