#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aia/agent.hpp"
#include "test_util.hpp"

using namespace aia;

namespace {

struct Fixture {
  Model model;
  ProblemInstance instance;
  explicit Fixture(const char* name)
      : model(test::load_domain(name)), instance(test::load_problem(name, model.vocabulary())) {}
};

}  // namespace

TEST_CASE("agent answers like the reference semantics") {
  std::mt19937_64 rng(5);
  for (const char* name : {"gripper", "blocksworld", "miconic"}) {
    Fixture f(name);
    Agent agent(f.model, f.instance);
    const auto atoms = ground_atoms(f.model.vocabulary(), f.instance);
    const auto calls = ground_calls(f.model.vocabulary(), f.instance);
    std::size_t executed_some = 0;
    for (int k = 0; k < 100; ++k) {
      // states biased towards reachable ones so that plans get past step one
      State s = k % 2 ? test::random_state(atoms, rng)
                      : agent.random_walk_states(1 + rng() % 6, 1, rng())[0];
      Plan p = test::random_plan(calls, 1 + rng() % 4, rng);
      QueryResponse r = agent.answer({s, p});
      CHECK(r == test::reference_simulate(f.model, s, p));
      executed_some += r.prefix_length > 0;
    }
    CHECK(executed_some > 0);
  }
}

TEST_CASE("prefix length is sound") {
  std::mt19937_64 rng(9);
  Fixture f("blocksworld");
  Agent agent(f.model, f.instance);
  const auto calls = ground_calls(f.model.vocabulary(), f.instance);
  for (int k = 0; k < 200; ++k) {
    State s = agent.random_walk_states(1 + rng() % 5, 1, rng())[0];
    Plan p = test::random_plan(calls, 1 + rng() % 5, rng);
    QueryResponse r = agent.answer({s, p});
    State cur = s;
    for (std::size_t i = 0; i < r.prefix_length; ++i) {
      GroundAction g = ground_action(f.model, p[i]);
      REQUIRE(applicable(g, cur));
      cur = apply_effects(g, cur);
    }
    CHECK(cur == r.final_state);
    if (r.prefix_length < p.size()) CHECK_FALSE(applicable(ground_action(f.model, p[r.prefix_length]), cur));
  }
}

TEST_CASE("cache hits do not count") {
  Fixture f("gripper");
  Agent agent(f.model, f.instance);
  const auto calls = ground_calls(f.model.vocabulary(), f.instance);
  PlanOutcomeQuery q{f.instance.init, {calls[0], calls[1]}};
  Answer a = agent.ask(q, QueryKind::lattice);
  CHECK(a.fresh);
  Answer b = agent.ask(q, QueryKind::repair);
  CHECK_FALSE(b.fresh);
  CHECK(a.response == b.response);
  CHECK(agent.distinct_queries() == 1);
  agent.ask({f.instance.init, {calls[2]}}, QueryKind::probe);
  CHECK(agent.distinct_queries() == 2);
  auto transcript = agent.transcript();
  REQUIRE(transcript.size() == 2);
  CHECK(transcript[0].index == 1);
  CHECK(transcript[0].kind == QueryKind::lattice);
  CHECK(transcript[1].query.plan.size() == 1);
}

TEST_CASE("malformed queries are rejected") {
  Fixture f("gripper");
  Agent agent(f.model, f.instance);
  const State& init = f.instance.init;
  CHECK_THROWS_AS(agent.answer({init, {{"fly", {"rooma"}}}}), MalformedQuery);
  CHECK_THROWS_AS(agent.answer({init, {{"move", {"rooma"}}}}), MalformedQuery);
  CHECK_THROWS_AS(agent.answer({init, {{"move", {"rooma", "nowhere"}}}}), MalformedQuery);
  CHECK_THROWS_AS(agent.answer({{{"glows", {"rooma"}}}, {}}), MalformedQuery);
  CHECK_THROWS_AS(agent.answer({init, {{"move", {"rooma", "rooma"}}}}), MalformedQuery);
  CHECK(agent.distinct_queries() == 0);
}

TEST_CASE("random walk states are reachable and reproducible") {
  for (const char* name : {"gripper", "blocksworld", "miconic"}) {
    Fixture f(name);
    Agent agent(f.model, f.instance);
    RandomWalkResult walks = agent.random_walks(20, 30, 42);
    CHECK(walks.states.size() == walks.paths.size());
    CHECK(std::set<State>(walks.states.begin(), walks.states.end()).size() == walks.states.size());
    for (std::size_t k = 0; k < walks.states.size(); ++k) {
      QueryResponse r = test::reference_simulate(f.model, f.instance.init, walks.paths[k]);
      CHECK(r.prefix_length == walks.paths[k].size());
      CHECK(r.final_state == walks.states[k]);
    }
    CHECK(agent.random_walk_states(20, 30, 42) == walks.states);
    CHECK(agent.distinct_queries() == 0);
  }
}

TEST_CASE("replay answers recorded queries only") {
  Fixture f("gripper");
  Agent agent(f.model, f.instance);
  const auto calls = ground_calls(f.model.vocabulary(), f.instance);
  PlanOutcomeQuery q{f.instance.init, {calls[0]}};
  QueryResponse r = agent.answer(q);
  ReplayOracle replay(agent.transcript());
  CHECK(replay.ask(q, QueryKind::lattice).response == r);
  CHECK(replay.distinct_queries() == 1);
  CHECK(replay.transcript().size() == 1);
  CHECK_THROWS_AS(replay.ask({f.instance.init, {calls[1]}}, QueryKind::lattice), Error);
}
