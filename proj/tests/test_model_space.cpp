#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "aia/model_space.hpp"
#include "test_util.hpp"

using namespace aia;

namespace {

Model random_model(const Model& like, std::mt19937_64& rng) {
  Model m(like.vocabulary_ptr());
  for (const PalTuple& pal : all_pal_tuples(like.vocabulary()))
    if (rng() % 2) m.insert({pal, kAllModes[rng() % 3]});
  return m;
}

}  // namespace

TEST_CASE("abstract undoes refine") {
  std::mt19937_64 rng(3);
  Model truth = test::load_domain("gripper");
  const auto gamma = all_pal_tuples(truth.vocabulary());
  for (int round = 0; round < 200; ++round) {
    Model m = random_model(truth, rng);
    const PalTuple& pal = gamma[rng() % gamma.size()];
    Mode mode = kAllModes[rng() % 3];
    if (m.contains_variant(pal)) {
      CHECK_THROWS_AS(refine(m, pal, mode), VariantConflict);
      continue;
    }
    Model child = refine(m, pal, mode);
    CHECK(child.size() == m.size() + 1);
    CHECK(child.mode_of(pal) == mode);
    CHECK(abstract(child, {pal, mode}) == m);
  }
}

TEST_CASE("abstract of an absent tuple is the identity") {
  Model m = test::load_domain("gripper");
  PalTuple missing = all_pal_tuples(m.vocabulary()).front();
  m.erase(missing);
  CHECK(abstract(m, {missing, Mode::positive}) == m);
}

TEST_CASE("variants") {
  PalTuple pal{"move", Location::pre, {"at-robby", {0}}};
  auto vs = variants(pal);
  for (const PalmTuple& a : vs)
    for (const PalmTuple& b : vs) CHECK(are_variants(a, b) == (a.mode != b.mode));
  PalTuple other{"move", Location::eff, {"at-robby", {0}}};
  CHECK_FALSE(are_variants(vs[0], {other, Mode::negative}));
}

TEST_CASE("accuracy against the hidden model") {
  Model truth = test::load_domain("gripper");
  CHECK(accuracy(truth, truth) == 1.0);
  CHECK(palm_accuracy(truth, truth) == 1.0);
  Model empty(truth.vocabulary_ptr());
  const double gamma = static_cast<double>(all_pal_tuples(truth.vocabulary()).size());
  CHECK(accuracy(empty, truth) == doctest::Approx((gamma - truth.size()) / gamma));
  CHECK(palm_accuracy(empty, truth) == 0.0);

  Model other = parse_domain(test::kLoadTruckDomain);
  CHECK_THROWS_AS(accuracy(other, truth), VocabularyMismatch);
}

TEST_CASE("pal ordering") {
  Model truth = test::load_domain("gripper");
  PalOrdering ordering = PalOrdering::default_for(truth.vocabulary());
  const auto gamma = all_pal_tuples(truth.vocabulary());
  CHECK(ordering.size() == gamma.size());
  CHECK(ordering.front() == gamma.front());
  CHECK(ordering.remove(gamma[3]));
  CHECK_FALSE(ordering.contains(gamma[3]));
  CHECK_FALSE(ordering.remove(gamma[3]));
  ordering.pop();
  CHECK(ordering.front() == gamma[1]);
}

TEST_CASE("model set grows by at most three per refinement") {
  std::mt19937_64 rng(11);
  Model truth = test::load_domain("gripper");
  for (int round = 0; round < 50; ++round) {
    ModelSet set(truth.vocabulary_ptr());
    CHECK(set.size() == 1);
    CHECK(set.representative().size() == 0);
    for (const PalTuple& pal : all_pal_tuples(truth.vocabulary())) {
      if (rng() % 3 == 0) continue;
      std::vector<Mode> modes;
      for (Mode m : kAllModes)
        if (rng() % 2) modes.push_back(m);
      if (modes.empty()) modes.push_back(Mode::none);
      const auto before = set.size();
      const auto footprint = set.footprint_size();
      set.refine(pal, modes);
      CHECK(set.size() == before * modes.size());
      CHECK(set.size() <= 3 * before);
      CHECK(set.footprint_size() == footprint + 1);
      CHECK_THROWS_AS(set.refine(pal, modes), VariantConflict);
    }
    // every member shares the footprint and belongs to the set
    for (const Model& member : set.members(32)) {
      CHECK(member.size() == set.footprint_size());
      CHECK(set.contains(member));
    }
  }
}

TEST_CASE("representative prefers none, then positive") {
  Model truth = test::load_domain("gripper");
  const auto gamma = all_pal_tuples(truth.vocabulary());
  ModelSet set(truth.vocabulary_ptr());
  set.refine(gamma[0], {Mode::positive, Mode::none});
  set.refine(gamma[1], {Mode::negative, Mode::positive});
  set.refine(gamma[2], {Mode::negative});
  Model rep = set.representative();
  CHECK(rep.mode_of(gamma[0]) == Mode::none);
  CHECK(rep.mode_of(gamma[1]) == Mode::positive);
  CHECK(rep.mode_of(gamma[2]) == Mode::negative);
  CHECK(set.definite_mode(gamma[2]) == Mode::negative);
  CHECK_FALSE(set.definite_mode(gamma[0]));
  CHECK(set.members(100).size() == 4);
  CHECK(set.members(3).size() == 3);

  CHECK(set.restrict(gamma[1], {Mode::negative}));
  CHECK(set.size() == 2);
  CHECK_FALSE(set.restrict(gamma[0], {Mode::negative}));
  CHECK(set.size() == 2);
}

TEST_CASE("model set membership") {
  Model truth = test::load_domain("gripper");
  const auto gamma = all_pal_tuples(truth.vocabulary());
  ModelSet set(truth.vocabulary_ptr());
  set.refine(gamma[0], {Mode::positive});
  Model m(truth.vocabulary_ptr());
  m.insert({gamma[0], Mode::positive});
  CHECK(set.contains(m));
  m.insert({gamma[1], Mode::positive});
  CHECK_FALSE(set.contains(m));
}
