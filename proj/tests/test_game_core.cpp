#include "doctest.h"
#include "oncs/arrival_order.hpp"
#include "oncs/coalition.hpp"
#include "oncs/cost_function.hpp"
#include "oncs/enumerate.hpp"
#include "oncs/shapley.hpp"

#include <set>
#include <stdexcept>
#include <vector>

using namespace oncs;

namespace {
PlayerId pid(unsigned i) { return PlayerId(i); }
}  // namespace

TEST_CASE("coalition set algebra") {
  const Coalition u = Coalition::full(4);
  CHECK(u.size() == 4);
  CHECK(u.ambient_size() == 4);

  const Coalition ac = Coalition::of({pid(0), pid(2)});
  CHECK(ac.contains(pid(0)));
  CHECK_FALSE(ac.contains(pid(1)));
  CHECK(ac.subset_of(u));
  CHECK_FALSE(u.subset_of(ac));
  CHECK(ac.with(pid(1)).size() == 3);
  CHECK(ac.without(pid(2)) == Coalition::of({pid(0)}));
  CHECK((ac | Coalition::of({pid(1)})) == Coalition::from_bits(0b0111));
  CHECK((ac & Coalition::of({pid(2), pid(3)})) == Coalition::of({pid(2)}));

  const auto members = ac.members();
  REQUIRE(members.size() == 2);
  CHECK(members[0] == pid(0));  // ascending index order
  CHECK(members[1] == pid(2));

  CHECK(to_string(ac) == "{A, C}");
  const std::vector<std::string> names{"x", "y", "z", "w"};
  CHECK(to_string(ac, names) == "{x, z}");
}

TEST_CASE("subset enumeration is ascending and complete") {
  const Coalition u = Coalition::from_bits(0b1011);
  std::vector<std::uint16_t> seen;
  for_each_subset(u, [&](Coalition s) {
    CHECK(s.subset_of(u));
    seen.push_back(s.bits());
  });
  CHECK(seen.size() == 8);
  CHECK(seen.front() == 0);
  CHECK(seen.back() == u.bits());
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(std::set<std::uint16_t>(seen.begin(), seen.end()).size() == 8);
}

TEST_CASE("arrival orders") {
  const ArrivalOrder ord = ArrivalOrder::of({2, 0, 1});
  CHECK(ord.size() == 3);
  CHECK(ord[0] == pid(2));
  CHECK(ord.position_of(pid(1)) == 2);
  CHECK(ord.players() == Coalition::full(3));
  CHECK(ord.prefix(2).sequence() == std::vector<PlayerId>{pid(2), pid(0)});
  CHECK(ord.up_to(pid(0)) == Coalition::of({pid(2), pid(0)}));

  // Restriction keeps relative order and drops everyone else.
  const ArrivalOrder r = ord.restricted(Coalition::of({pid(2), pid(1)}));
  CHECK(r.sequence() == std::vector<PlayerId>{pid(2), pid(1)});

  CHECK_THROWS_AS(ArrivalOrder::of({0, 0}), std::invalid_argument);
  CHECK(to_string(ord) == "[C, A, B]");
}

TEST_CASE("zero-one cost functions canonicalize their minimal sets") {
  const Coalition u = Coalition::full(3);
  const Coalition a = Coalition::of({pid(0)});
  const Coalition bc = Coalition::of({pid(1), pid(2)});
  const CostFunction c = CostFunction::zero_one(u, {bc, a, a.with(pid(1)), bc});

  // {A, B} is a superset of {A}; duplicates collapse.
  REQUIRE(c.minimal_sets().size() == 2);
  CHECK(c.minimal_sets()[0] == a);
  CHECK(c.minimal_sets()[1] == bc);

  CHECK(c.evaluate(Coalition()) == Rational(0));
  CHECK(c.evaluate(a) == Rational(1));
  CHECK(c.evaluate(Coalition::of({pid(1)})) == Rational(0));
  CHECK(c.evaluate(bc) == Rational(1));
  CHECK(c.is_zero_one());
  CHECK(c.validate().ok());

  CHECK_THROWS_AS(CostFunction::zero_one(u, {Coalition()}), std::domain_error);
  CHECK_THROWS_AS(c.evaluate(Coalition::full(4)), std::domain_error);
}

TEST_CASE("table cost functions validate monotonicity and normalization") {
  const Coalition u = Coalition::full(2);
  const CostFunction good = CostFunction::table(u, {Rational(0), Rational(1), Rational(2), Rational(3)});
  CHECK(good.validate().ok());
  CHECK_FALSE(good.is_zero_one());
  CHECK(good.evaluate(Coalition::full(2)) == Rational(3));

  const CostFunction bad = CostFunction::table(u, {Rational(1), Rational(2), Rational(1), Rational(1)});
  const ValidationReport report = bad.validate();
  REQUIRE_FALSE(report.ok());
  bool saw_empty = false, saw_mono = false;
  for (const ValidationIssue& issue : report.issues) {
    if (issue.kind == ValidationIssue::Kind::EmptySetNonzero) saw_empty = true;
    if (issue.kind == ValidationIssue::Kind::MonotonicityViolation) saw_mono = true;
  }
  CHECK(saw_empty);
  CHECK(saw_mono);  // c({A}) = 2 > 1 = c({A, B})

  // Raw zero-one construction exists so validation can flag bad antichains.
  const CostFunction raw = CostFunction::zero_one_raw(
      u, {Coalition::of({pid(0)}), Coalition::full(2), Coalition()});
  const ValidationReport raw_report = raw.validate();
  bool saw_comparable = false, saw_empty_set = false;
  for (const ValidationIssue& issue : raw_report.issues) {
    if (issue.kind == ValidationIssue::Kind::AntichainComparable) saw_comparable = true;
    if (issue.kind == ValidationIssue::Kind::AntichainEmptySet) saw_empty_set = true;
  }
  CHECK(saw_comparable);
  CHECK(saw_empty_set);
}

TEST_CASE("restriction keeps player identity and filters minimal sets") {
  const Coalition u = Coalition::full(3);
  const CostFunction c = CostFunction::zero_one(
      u, {Coalition::of({pid(0)}), Coalition::of({pid(1), pid(2)})});
  const Coalition s = Coalition::of({pid(1), pid(2)});
  const CostFunction r = c.restricted(s);
  CHECK(r.universe() == s);
  REQUIRE(r.minimal_sets().size() == 1);
  CHECK(r.minimal_sets()[0] == s);

  // Restriction and table conversion agree with direct evaluation.
  const CostFunction rt = c.to_table().restricted(s);
  CHECK(semantically_equal(r, rt));
  for_each_subset(s, [&](Coalition t) { CHECK(r.evaluate(t) == c.evaluate(t)); });

  CHECK(semantically_equal(c, c.to_table()));
  CHECK_FALSE(semantically_equal(c, CostFunction::constant_zero(u)));
}

TEST_CASE("marginal cost") {
  const Coalition u = Coalition::full(2);
  const CostFunction c = CostFunction::table(u, {Rational(0), Rational(1), Rational(2), Rational(3)});
  CHECK(marginal_cost(c, pid(0), Coalition::full(2)) == Rational(1));
  CHECK(marginal_cost(c, pid(1), Coalition::full(2)) == Rational(2));
  CHECK(marginal_cost(c, pid(0), Coalition::of({pid(0)})) == Rational(1));
  CHECK_THROWS_AS(marginal_cost(c, pid(1), Coalition::of({pid(0)})), std::domain_error);
}

TEST_CASE("factorial and permutation oracle") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(10) == 3628800);
  const auto orders = all_orders(Coalition::full(3));
  REQUIRE(orders.size() == 6);
  CHECK(orders.front().sequence() == std::vector<PlayerId>{pid(0), pid(1), pid(2)});
  CHECK(orders.back().sequence() == std::vector<PlayerId>{pid(2), pid(1), pid(0)});
  std::set<std::vector<PlayerId>> distinct;
  for (const ArrivalOrder& o : orders) distinct.insert(o.sequence());
  CHECK(distinct.size() == 6);
}

TEST_CASE("shapley oracle on known games") {
  // Single required pair: both players split the unit cost.
  const CostFunction pair = CostFunction::zero_one(
      Coalition::full(2), {Coalition::full(2)});
  const ShareVector sv_pair = shapley_oracle(pair);
  CHECK(sv_pair[0] == Rational(1, 2));
  CHECK(sv_pair[1] == Rational(1, 2));

  // {A} or {B, C} triggers the cost: A carries 2/3, B and C carry 1/6 each.
  const CostFunction or_game = CostFunction::zero_one(
      Coalition::full(3), {Coalition::of({pid(0)}), Coalition::of({pid(1), pid(2)})});
  const ShareVector sv = shapley_oracle(or_game);
  CHECK(sv[0] == Rational(2, 3));
  CHECK(sv[1] == Rational(1, 6));
  CHECK(sv[2] == Rational(1, 6));
  CHECK(sv[0] + sv[1] + sv[2] == Rational(1));

  // Additive game: Shapley returns each player's own cost.
  const CostFunction add = CostFunction::table(
      Coalition::full(2), {Rational(0), Rational(1), Rational(2), Rational(3)});
  const ShareVector sv_add = shapley_oracle(add);
  CHECK(sv_add[0] == Rational(1));
  CHECK(sv_add[1] == Rational(2));
}

TEST_CASE("monotone 0-1 enumeration counts") {
  CHECK(enumerate_monotone_01(1).size() == 2);
  CHECK(enumerate_monotone_01(2).size() == 5);
  CHECK(enumerate_monotone_01(3).size() == 19);
  CHECK(enumerate_monotone_01(4).size() == 167);
  CHECK(enumerate_monotone_01(5).size() == 7580);
  CHECK_THROWS_AS(enumerate_monotone_01(6), std::length_error);

  // Every enumerated function is valid, distinct, and 0-1.
  std::set<std::vector<Coalition>> seen;
  for (const CostFunction& c : enumerate_monotone_01(3)) {
    CHECK(c.validate().ok());
    CHECK(c.is_zero_one());
    seen.insert(c.minimal_sets());
  }
  CHECK(seen.size() == 19);
}
