#include "doctest.h"
#include "oncs/decompose.hpp"
#include "oncs/verifier.hpp"

#include <stdexcept>

using namespace oncs;

namespace {

PlayerId pid(unsigned i) { return PlayerId(i); }

// Reconstructs sum of weight * component and compares against c everywhere.
void check_reconstructs(const CostFunction& c, const Decomposition& d) {
  for_each_subset(c.universe(), [&](Coalition s) {
    Rational sum;
    for (const WeightedComponent& wc : d.components) {
      sum += wc.weight * wc.game.evaluate(s);
    }
    CHECK(sum == c.evaluate(s));
  });
}

}  // namespace

TEST_CASE("the staircase splits into three unit level sets") {
  const CostFunction c = verifier::fixtures::staircase();
  const Decomposition d = decompose(c);
  REQUIRE(d.components.size() == 3);

  // Level 1: {A} or {B}. Level 2: {B}. Level 3: {A, B}.
  CHECK(d.components[0].weight == Rational(1));
  CHECK(d.components[0].game.minimal_sets() ==
        std::vector<Coalition>{Coalition::of({pid(0)}), Coalition::of({pid(1)})});
  CHECK(d.components[1].weight == Rational(1));
  CHECK(d.components[1].game.minimal_sets() ==
        std::vector<Coalition>{Coalition::of({pid(1)})});
  CHECK(d.components[2].weight == Rational(1));
  CHECK(d.components[2].game.minimal_sets() == std::vector<Coalition>{Coalition::full(2)});

  CHECK(verify_decomposition(c, d).ok());
  check_reconstructs(c, d);
}

TEST_CASE("fractional values produce fractional weights") {
  const CostFunction c = CostFunction::table(
      Coalition::full(2), {Rational(0), Rational(1, 2), Rational(1, 2), Rational(7, 3)});
  const Decomposition d = decompose(c);
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0].weight == Rational(1, 2));   // level 1/2
  CHECK(d.components[1].weight == Rational(11, 6));  // 7/3 - 1/2
  CHECK(verify_decomposition(c, d).ok());
  check_reconstructs(c, d);
}

TEST_CASE("degenerate inputs") {
  // A 0-1 game is its own single component; constant zero has none.
  const CostFunction c = verifier::fixtures::or_single_pair();
  const Decomposition d = decompose(c);
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0].weight == Rational(1));
  CHECK(d.components[0].game == c);

  CHECK(decompose(CostFunction::constant_zero(Coalition::full(3))).components.empty());

  const CostFunction invalid = CostFunction::table(
      Coalition::full(1), {Rational(0), Rational(-1)});
  CHECK_THROWS_AS(decompose(invalid), std::invalid_argument);
}

TEST_CASE("the verifier flags broken decompositions") {
  const CostFunction c = verifier::fixtures::staircase();
  Decomposition d = decompose(c);

  SUBCASE("tampered weight") {
    d.components[0].weight = Rational(2);
    const DecompositionReport report = verify_decomposition(c, d);
    REQUIRE_FALSE(report.ok());
    bool saw_sum = false;
    for (const DecompositionIssue& issue : report.issues) {
      if (issue.kind == DecompositionIssue::Kind::SumMismatch) saw_sum = true;
    }
    CHECK(saw_sum);
  }

  SUBCASE("nonpositive weight") {
    d.components[0].weight = Rational(0);
    const DecompositionReport report = verify_decomposition(c, d);
    REQUIRE_FALSE(report.ok());
    bool saw_weight = false;
    for (const DecompositionIssue& issue : report.issues) {
      if (issue.kind == DecompositionIssue::Kind::NonpositiveWeight) saw_weight = true;
    }
    CHECK(saw_weight);
  }

  SUBCASE("wrong universe") {
    d.components[0].game = CostFunction::zero_one(
        Coalition::full(3), {Coalition::of({pid(0)})});
    const DecompositionReport report = verify_decomposition(c, d);
    REQUIRE_FALSE(report.ok());
    bool saw_universe = false;
    for (const DecompositionIssue& issue : report.issues) {
      if (issue.kind == DecompositionIssue::Kind::UniverseMismatch) saw_universe = true;
    }
    CHECK(saw_universe);
  }
}

TEST_CASE("restriction then decomposition merges adjacent levels") {
  // On {A, B}: values 1, 2, 3. Restricted to {B}: values 0, 2 — one level
  // of weight 2; the three restricted components merge into it.
  const CostFunction c = verifier::fixtures::staircase();
  const CostFunction r = c.restricted(Coalition::of({pid(1)}));
  const Decomposition dr = decompose(r);
  REQUIRE(dr.components.size() == 1);
  CHECK(dr.components[0].weight == Rational(2));
  CHECK(dr.components[0].game.minimal_sets() ==
        std::vector<Coalition>{Coalition::of({pid(1)})});
  CHECK(verify_decomposition(r, dr).ok());
}
