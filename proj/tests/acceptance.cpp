// One line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "aia/interrogation.hpp"
#include "aia/io.hpp"
#include "planner_oracle.hpp"
#include "twin_oracle.hpp"

using namespace aia;

namespace {

struct Domain {
  const char* name;
  std::size_t lattice_cap;
  std::size_t reference_queries;  // target for the total, accepted within half to one and a half times
};

const Domain kDomains[] = {{"gripper", 30, 17}, {"blocksworld", 72, 48}, {"miconic", 80, 39}};

struct Setup {
  Model truth;
  ProblemInstance instance;
  explicit Setup(const char* name)
      : truth(test::load_domain(name)), instance(test::load_problem(name, truth.vocabulary())) {}
};

struct Outcome {
  RunResult result;
  std::vector<State> pool;
  std::string transcript;
  std::string learned;
};

Outcome interrogate(const Setup& s, std::uint64_t seed, const Model* truth = nullptr) {
  Agent agent(s.truth, s.instance);
  Outcome out;
  out.pool = agent.random_walk_states(40, 60, seed);
  RunConfig config;
  config.truth = truth;
  out.result = run_aia(agent, s.truth.vocabulary_ptr(), s.instance, out.pool, config);
  out.transcript = io::write_transcript(agent.transcript());
  for (const Model& m : out.result.state.models.members(64)) out.learned += emit_domain(m);
  return out;
}

int failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void correct_models() {
  bool pass = true;
  std::string detail;
  for (const Domain& d : kDomains) {
    Setup s(d.name);
    auto start = std::chrono::steady_clock::now();
    Outcome o = interrogate(s, 1);
    const ModelSet& models = o.result.state.models;
    bool every_member = all_members_equivalent(models, s.truth, o.pool, s.instance, 2).equivalent;
    Model canonical = models.representative();
    bool canonical_equivalent = functionally_equivalent(canonical, s.truth, o.pool, s.instance, 2).equivalent;
    bool structural = canonical.without_empty_modes() == s.truth;
    pass &= every_member && canonical_equivalent && structural;
    char line[256];
    std::snprintf(line, sizeof line, "%s%s members=%llu equivalent=%d canonical=%d structural=%d %.1fs",
                  detail.empty() ? "" : "; ", d.name, static_cast<unsigned long long>(models.size()), every_member,
                  canonical_equivalent, structural, seconds_since(start));
    detail += line;
  }
  verdict(1, pass, detail);
}

void query_budget() {
  bool pass = true;
  std::string detail;
  for (const Domain& d : kDomains) {
    Setup s(d.name);
    Outcome o = interrogate(s, 1);
    const auto& st = o.result.state;
    std::size_t total = st.lattice_queries + st.repair_queries;
    // the bound computed for the bundled encoding can be tighter than the listed one
    const std::size_t bound = std::min(d.lattice_cap, 2 * count_instantiated_predicates(s.truth.vocabulary()) *
                                                          s.truth.vocabulary().actions.size());
    bool cap = st.lattice_queries <= bound;
    bool band = 2 * total >= d.reference_queries && 2 * total <= 3 * d.reference_queries;
    pass &= cap && band;
    char line[256];
    std::snprintf(line, sizeof line, "%s%s lattice=%zu<=%zu repair=%zu total=%zu in [%.1f, %.1f]=%s",
                  detail.empty() ? "" : "; ", d.name, st.lattice_queries, bound, st.repair_queries, total,
                  0.5 * d.reference_queries, 1.5 * d.reference_queries, band ? "yes" : "no");
    detail += line;
  }
  verdict(2, pass, detail);
}

void never_prune_truth() {
  std::size_t runs = 0, violations = 0, failed = 0;
  for (const Domain& d : kDomains) {
    Setup s(d.name);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      ++runs;
      try {
        violations += interrogate(s, seed, &s.truth).result.report.safety_violations;
      } catch (const Error& e) {
        ++failed;
        std::fprintf(stderr, "%s seed %llu: %s\n", d.name, static_cast<unsigned long long>(seed), e.what());
      }
    }
  }
  verdict(3, violations == 0 && failed == 0,
          std::to_string(runs) + " runs, " + std::to_string(violations) + " violations, " + std::to_string(failed) +
              " aborted");
}

void distinguishing_plans() {
  auto start = std::chrono::steady_clock::now();
  Model like = parse_domain(test::kTwinDomain);
  ProblemInstance inst = parse_problem(test::kTwinProblem, like.vocabulary());
  const auto plans = test::all_plans(ground_calls(like.vocabulary(), inst), 3);
  std::mt19937_64 rng(2020);
  std::size_t agree = 0, solvable = 0;
  for (int k = 0; k < 100; ++k) {
    test::TwinCase c = test::random_twin_case(like, inst, rng);
    GeneratedQuery q = generate_query(c.base, c.pal, c.mode_i, c.mode_j, {c.initial}, inst, {3, 1'000'000});
    bool brute = test::brute_force_distinguishing(q.twin_i, q.twin_j, c.initial, plans).has_value();
    agree += brute == q.query.has_value();
    solvable += brute;
  }
  double elapsed = seconds_since(start);
  char line[160];
  std::snprintf(line, sizeof line, "%zu/100 agree (%zu solvable), %.2fs", agree, solvable, elapsed);
  verdict(4, agree == 100 && elapsed < 60, line);
}

const char* kToyDomain = R"((define (domain toy) (:requirements :strips :negative-preconditions)
  (:predicates (p ?x) (q ?x))
  (:action act :parameters (?x) :precondition (and) :effect (and))))";
const char* kToyProblem = R"((define (problem toy-2) (:domain toy) (:objects o1 o2) (:init)))";

// Responses to every query of at most two steps from every pool state.
std::vector<QueryResponse> signature(const Model& m, const std::vector<State>& pool, const std::vector<Plan>& plans) {
  std::vector<QueryResponse> out;
  for (const State& s : pool)
    for (const Plan& plan : plans) out.push_back(test::reference_simulate(m, s, plan));
  return out;
}

void exhaustive_models() {
  Model like = parse_domain(kToyDomain);
  ProblemInstance inst = parse_problem(kToyProblem, like.vocabulary());
  const auto gamma = all_pal_tuples(like.vocabulary());
  const auto atoms = ground_atoms(like.vocabulary(), inst);
  const auto plans = test::all_plans(ground_calls(like.vocabulary(), inst), 2);

  std::vector<State> pool;
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    State s;
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (mask >> k & 1) s.insert(atoms[k]);
    pool.push_back(s);
  }

  std::vector<Model> assignments;
  for (std::size_t code = 0; code < 81; ++code) {
    Model m(like.vocabulary_ptr());
    std::size_t c = code;
    for (const PalTuple& pal : gamma) {
      m.insert({pal, kAllModes[c % 3]});
      c /= 3;
    }
    assignments.push_back(std::move(m));
  }
  std::vector<std::vector<QueryResponse>> signatures;
  for (const Model& m : assignments) signatures.push_back(signature(m, pool, plans));
  // class of an assignment: the first assignment answering every query alike
  std::vector<std::size_t> klass(assignments.size());
  for (std::size_t k = 0; k < assignments.size(); ++k)
    for (std::size_t first = 0; first <= k; ++first)
      if (signatures[first] == signatures[k]) {
        klass[k] = first;
        break;
      }

  std::size_t equal_sets = 0, exact_sets = 0;
  for (std::size_t hidden = 0; hidden < assignments.size(); ++hidden) {
    Agent agent(assignments[hidden], inst);
    RunResult r = run_aia(agent, like.vocabulary_ptr(), inst, pool);
    std::set<std::size_t> learned, brute;
    for (const Model& m : r.state.models.members(81))
      for (std::size_t k = 0; k < assignments.size(); ++k)
        if (assignments[k] == m) learned.insert(k);
    for (std::size_t k = 0; k < assignments.size(); ++k)
      if (signatures[k] == signatures[hidden]) brute.insert(k);
    std::set<std::size_t> learned_classes, brute_classes;
    for (std::size_t k : learned) learned_classes.insert(klass[k]);
    for (std::size_t k : brute) brute_classes.insert(klass[k]);
    equal_sets += learned_classes == brute_classes;
    exact_sets += learned == brute;
  }
  verdict(5, equal_sets == assignments.size(),
          std::to_string(equal_sets) + "/81 hidden assignments give the brute-force set modulo equivalence (" +
              std::to_string(exact_sets) + "/81 identical as sets of assignments)");
}

void planner_oracle() {
  std::mt19937_64 rng(6);
  std::size_t agree = 0, solvable = 0;
  for (int k = 0; k < 100; ++k) {
    GroundedProblem p = test::random_problem(rng);
    auto expected = test::oracle_plan_length(p, 6);
    auto plan = solve(p, {6, 1'000'000});
    bool ok = plan.has_value() == expected.has_value();
    if (ok && plan) ok = plan->size() == *expected && validate(p, *plan).valid;
    agree += ok;
    solvable += expected.has_value();
  }
  verdict(6, agree == 100, std::to_string(agree) + "/100 agree (" + std::to_string(solvable) + " solvable)");
}

void determinism() {
  bool pass = true;
  std::string detail;
  for (const Domain& d : kDomains) {
    Setup s(d.name);
    Outcome a = interrogate(s, 7);
    Outcome b = interrogate(s, 7);
    bool same = a.transcript == b.transcript && a.learned == b.learned;
    pass &= same;
    detail += (detail.empty() ? "" : "; ") + std::string(d.name) + (same ? " identical" : " differs");
  }
  verdict(7, pass, detail);
}

}  // namespace

int main() {
  const std::pair<int, std::function<void()>> checks[] = {
      {1, correct_models}, {2, query_budget}, {3, never_prune_truth}, {4, distinguishing_plans},
      {5, exhaustive_models}, {6, planner_oracle}, {7, determinism}};
  for (const auto& [criterion, check] : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      verdict(criterion, false, std::string("error: ") + e.what());
    }
  }
  std::printf("criterion 8 DECLARED: not reproducible here (absolute per-query times, larger benchmark rows, "
              "comparison with other learners, image-based agents); covered by criteria 1-7\n");
  return failures == 0 ? 0 : 1;
}
