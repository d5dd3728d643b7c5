#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aia/planner.hpp"
#include "planner_oracle.hpp"
#include "test_util.hpp"

using namespace aia;

TEST_CASE("search agrees with the exhaustive oracle") {
  std::mt19937_64 rng(2024);
  std::size_t solvable = 0;
  for (int k = 0; k < 300; ++k) {
    GroundedProblem p = test::random_problem(rng);
    auto expected = test::oracle_plan_length(p, 6);
    auto plan = solve(p, {6, 1'000'000});
    REQUIRE(plan.has_value() == expected.has_value());
    if (plan) {
      ++solvable;
      CHECK(plan->size() == *expected);
      CHECK(validate(p, *plan).valid);
    }
  }
  CHECK(solvable > 30);
}

TEST_CASE("a goal true initially needs no steps") {
  GroundedProblem p;
  p.add_atom({"p", {}});
  p.initial = Bits(1);
  p.initial.set(0);
  p.goal = {{{0, true}}};
  auto plan = solve(p);
  REQUIRE(plan);
  CHECK(plan->empty());
}

TEST_CASE("no actions and an unmet goal") {
  GroundedProblem p;
  p.add_atom({"p", {}});
  p.initial = Bits(1);
  p.goal = {{{0, true}}};
  CHECK_FALSE(solve(p));
}

TEST_CASE("plan cap and node cap") {
  // a chain p0 -> p1 -> ... -> p5
  GroundedProblem p;
  for (int i = 0; i < 6; ++i) p.add_atom({"p" + std::to_string(i), {}});
  p.initial = Bits(6);
  p.initial.set(0);
  for (std::uint32_t i = 0; i < 5; ++i)
    p.actions.push_back({{"step" + std::to_string(i), {}}, {{{i, true}}}, {{{}, {i + 1}, {i}}}});
  p.goal = {{{5, true}}};
  CHECK(solve(p, {5, 100})->size() == 5);
  CHECK_FALSE(solve(p, {4, 100}));
  CHECK_THROWS_AS(solve(p, {10, 3}), ResourceLimit);
}

TEST_CASE("apply matches ground STRIPS semantics") {
  std::mt19937_64 rng(77);
  for (const char* name : {"gripper", "blocksworld", "miconic"}) {
    Model m = test::load_domain(name);
    ProblemInstance inst = test::load_problem(name, m.vocabulary());
    GroundedProblem p;
    for (const GroundAtom& a : ground_atoms(m.vocabulary(), inst)) p.add_atom(a);
    const auto calls = ground_calls(m.vocabulary(), inst);
    for (const ActionCall& call : calls) {
      GroundAction g = ground_action(m, call);
      GroundedAction a;
      a.call = call;
      Clause pre;
      for (const auto& x : g.pre_pos) pre.push_back({*p.find(x), true});
      for (const auto& x : g.pre_neg) pre.push_back({*p.find(x), false});
      a.pre = {pre};
      ConditionalEffect e;
      for (const auto& x : g.add) e.add.push_back(*p.find(x));
      for (const auto& x : g.del) e.del.push_back(*p.find(x));
      a.effects = {e};
      p.actions.push_back(std::move(a));
    }
    for (int k = 0; k < 1000 / 3 + 1; ++k) {
      State s = test::random_state(p.atoms, rng);
      std::size_t i = rng() % calls.size();
      QueryResponse r = test::reference_simulate(m, s, {calls[i]});
      Bits bits = p.encode(s);
      std::optional<Bits> next = apply(p.actions[i], bits);
      CHECK(next.has_value() == (r.prefix_length == 1));
      if (next) CHECK(p.decode(*next) == r.final_state);
      CHECK(p.decode(bits) == s);  // the input is untouched
      CHECK(apply(p.actions[i], bits) == next);
    }
  }
}

TEST_CASE("validation reports the first failing step") {
  std::mt19937_64 rng(31);
  std::size_t mutated = 0;
  for (int k = 0; k < 300 && mutated < 100; ++k) {
    GroundedProblem p = test::random_problem(rng);
    auto plan = solve(p, {6, 1'000'000});
    if (!plan || plan->empty()) continue;
    ++mutated;
    std::vector<std::size_t> bad = *plan;
    std::size_t at = rng() % bad.size();
    bad[at] = rng() % p.actions.size();
    // recompute the expected verdict step by step with the oracle semantics
    test::Flat s(p.atoms.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = p.initial.test(i);
    std::optional<std::size_t> fail;
    for (std::size_t i = 0; i < bad.size(); ++i) {
      auto n = test::flat_apply(p.actions[bad[i]], s);
      if (!n) {
        fail = i;
        break;
      }
      s = *n;
    }
    Validation v = validate(p, bad);
    CHECK(v.failing_step == fail);
    CHECK(v.valid == (!fail && test::flat_holds(p.goal, s)));
    std::vector<std::size_t> out_of_range{p.actions.size()};
    CHECK(validate(p, out_of_range).failing_step == std::size_t{0});
  }
  CHECK(mutated == 100);
}

TEST_CASE("bit sets") {
  Bits b(130);
  b.set(0);
  b.set(64);
  b.set(129);
  CHECK(b.count() == 3);
  CHECK(b.test(129));
  b.set(64, false);
  CHECK_FALSE(b.test(64));
  Bits c(130);
  c.set(0);
  c.set(129);
  CHECK(b == c);
  CHECK(b.hash() == c.hash());
}
