#include "doctest.h"
#include "oncs/shuffle.hpp"
#include "oncs/shapley.hpp"
#include "oncs/verifier.hpp"

#include <map>
#include <stdexcept>
#include <vector>

using namespace oncs;

namespace {

std::vector<PlayerId> ids(std::initializer_list<unsigned> xs) {
  std::vector<PlayerId> out;
  for (unsigned x : xs) out.push_back(PlayerId(x));
  return out;
}

}  // namespace

TEST_CASE("single arrivals with unit singleton cost lead the image") {
  // c({A}) = 1: A is marginal immediately and has no related player.
  const CostFunction c = verifier::fixtures::or_single_pair();
  ShuffleState st(c);
  st.insert_next(PlayerId(0), reverse_rule());
  CHECK(st.image().sequence == ids({0}));
  REQUIRE(st.image().marginal.has_value());
  CHECK(*st.image().marginal == PlayerId(0));
  CHECK_FALSE(st.image().related.has_value());
  CHECK(st.image().la_players().empty());
}

TEST_CASE("marginal insertion lands at the earliest qualifying prefix") {
  // {A} or {B, C}: after [A, B], C's arrival makes the prefix {B, C} cost 1
  // before {A} enters, so C slots in right after B and pushes A last.
  const CostFunction c = verifier::fixtures::or_single_pair();
  const ImageOrdering img = shuffle(ArrivalOrder::of({0, 1, 2}), c, reverse_rule());
  CHECK(img.sequence == ids({1, 2, 0}));
  REQUIRE(img.marginal.has_value());
  CHECK(*img.marginal == PlayerId(2));
  REQUIRE(img.related.has_value());
  CHECK(*img.related == PlayerId(1));
}

TEST_CASE("late arrivals hit the block, not positions past the marginal") {
  // Single minimal pair {A, B}: C arrives after B became marginal. The
  // reverse rule puts C at the front of the late-arrival block, directly
  // before the marginal player: [A, C, B], never [C, A, B] or [A, B, C].
  const CostFunction c = verifier::fixtures::single_pair();
  const ImageOrdering img = shuffle(ArrivalOrder::of({0, 1, 2}), c, reverse_rule());
  CHECK(img.sequence == ids({0, 2, 1}));
  REQUIRE(img.marginal.has_value());
  CHECK(*img.marginal == PlayerId(1));
  CHECK(img.la_players() == ids({2}));
  CHECK(img.sequence != ids({2, 0, 1}));
  CHECK(img.sequence != ids({0, 1, 2}));
}

TEST_CASE("seven-player walk pins every intermediate image") {
  const CostFunction c = verifier::fixtures::seven_player();
  const std::vector<std::vector<PlayerId>> want = {
      ids({0}),
      ids({1, 0}),
      ids({1, 2, 0}),
      ids({1, 3, 2, 0}),
      ids({1, 3, 4, 2, 0}),
      ids({1, 3, 5, 4, 2, 0}),
      ids({1, 3, 6, 5, 4, 2, 0}),
  };
  ShuffleState st(c);
  for (unsigned k = 0; k < 7; ++k) {
    st.insert_next(PlayerId(k), reverse_rule());
    CAPTURE(k);
    CHECK(st.image().sequence == want[k]);
  }
  REQUIRE(st.image().marginal.has_value());
  CHECK(*st.image().marginal == PlayerId(4));
  REQUIRE(st.image().related.has_value());
  CHECK(*st.image().related == PlayerId(3));
  CHECK(st.image().la_players() == ids({6, 5}));  // G, F arrived after E

  // One-shot shuffle agrees with the incremental walk.
  const ImageOrdering img = shuffle(ArrivalOrder::of({0, 1, 2, 3, 4, 5, 6}), c, reverse_rule());
  CHECK(img.sequence == want.back());
}

TEST_CASE("coordinate rules diverge only in the late-arrival block") {
  const CostFunction c = verifier::fixtures::five_player();
  const ArrivalOrder order = ArrivalOrder::of({0, 1, 2, 3, 4});

  const ImageOrdering rev = shuffle(order, c, reverse_rule());
  CHECK(rev.sequence == ids({2, 4, 1, 3, 0}));
  REQUIRE(rev.marginal.has_value());
  CHECK(*rev.marginal == PlayerId(4));

  ShuffleState st(c);
  st.insert_next(PlayerId(0), arrival_rule());
  st.insert_next(PlayerId(1), arrival_rule());
  st.insert_next(PlayerId(2), arrival_rule());
  CHECK(st.image().sequence == ids({1, 2, 0}));
  st.insert_next(PlayerId(3), arrival_rule());
  st.insert_next(PlayerId(4), arrival_rule());
  CHECK(st.image().sequence == ids({1, 4, 3, 2, 0}));
  REQUIRE(st.image().marginal.has_value());
  CHECK(*st.image().marginal == PlayerId(3));
}

TEST_CASE("images are distinct across all orders of small games") {
  // Bijectivity spot check: 3! and 4! orders all map to distinct images.
  for (const CostFunction& c : {verifier::fixtures::or_single_pair(),
                                verifier::fixtures::single_pair()}) {
    std::map<std::vector<PlayerId>, std::vector<PlayerId>> seen;
    for (const ArrivalOrder& o : all_orders(c.universe())) {
      const ImageOrdering img = shuffle(o, c, reverse_rule());
      const bool fresh = seen.emplace(img.sequence, o.sequence()).second;
      CAPTURE(to_string(o));
      CHECK(fresh);
    }
    CHECK(seen.size() == std::size_t(factorial(c.player_count())));
  }
}

TEST_CASE("inversion reconstructs the arrival order") {
  const CostFunction c = verifier::fixtures::seven_player();

  const InversionResult res = invert(ids({1, 3, 6, 5, 4, 2, 0}), c, reverse_rule());
  CHECK(res.arrival.sequence() == ids({0, 1, 2, 3, 4, 5, 6}));
  CHECK(res.identified_latest_first == ids({6, 5, 4, 3, 2, 1, 0}));

  // Round trip over every order of the three-player fixtures, both rules.
  for (const CostFunction& g : {verifier::fixtures::or_single_pair(),
                                verifier::fixtures::single_pair()}) {
    for (const CoordinateRule* rule : {&reverse_rule(), &arrival_rule()}) {
      for (const ArrivalOrder& o : all_orders(g.universe())) {
        const ImageOrdering img = shuffle(o, g, *rule);
        const InversionResult r = invert(img.sequence, g, *rule);
        CHECK(r.arrival.sequence() == o.sequence());
        std::vector<PlayerId> reversed(o.sequence().rbegin(), o.sequence().rend());
        CHECK(r.identified_latest_first == reversed);
      }
    }
  }
}

TEST_CASE("marginal and related finders agree with the engine") {
  const CostFunction c = verifier::fixtures::seven_player();
  const std::vector<PlayerId> img = ids({1, 3, 6, 5, 4, 2, 0});
  const auto m = find_marginal(img, c);
  REQUIRE(m.has_value());
  CHECK(m->player == PlayerId(4));
  CHECK(m->position == 4);
  const RelatedLa rl = find_related_and_la(img, c);
  REQUIRE(rl.related.has_value());
  CHECK(*rl.related == PlayerId(3));
  CHECK(rl.la == ids({6, 5}));

  CHECK_FALSE(find_marginal(ids({0}), verifier::fixtures::single_pair()).has_value());
  CHECK_THROWS_AS(find_related_and_la(ids({0}), verifier::fixtures::single_pair()),
                  std::invalid_argument);
}

TEST_CASE("shuffling rejects non-binary costs") {
  CHECK_THROWS_AS((void)ShuffleState(verifier::fixtures::staircase()), std::invalid_argument);
}

TEST_CASE("try_marginal_insert previews the insertion position") {
  const CostFunction c = verifier::fixtures::or_single_pair();
  ShuffleState st(c);
  st.insert_next(PlayerId(1), reverse_rule());  // B alone costs 0
  CHECK_FALSE(st.image().marginal.has_value());
  const auto pos_c = st.try_marginal_insert(PlayerId(2));
  REQUIRE(pos_c.has_value());
  CHECK(*pos_c == 1);  // after B: {B, C} costs 1
  const auto pos_a = st.try_marginal_insert(PlayerId(0));
  REQUIRE(pos_a.has_value());
  CHECK(*pos_a == 0);  // {A} alone costs 1
  CHECK_THROWS_AS(st.try_marginal_insert(PlayerId(1)), std::logic_error);
}
