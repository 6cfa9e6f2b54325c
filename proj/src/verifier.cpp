#include "oncs/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <iomanip>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "oncs/decompose.hpp"
#include "oncs/enumerate.hpp"
#include "oncs/game_spec.hpp"
#include "oncs/shapley.hpp"

namespace oncs::verifier {

using nlohmann::json;

namespace fixtures {

CostFunction or_single_pair() {
  const PlayerId A{0u}, B{1u}, C{2u};
  return CostFunction::zero_one(Coalition::full(3), {Coalition::of({A}), Coalition::of({B, C})});
}

CostFunction single_pair() {
  const PlayerId A{0u}, B{1u};
  return CostFunction::zero_one(Coalition::full(3), {Coalition::of({A, B})});
}

CostFunction seven_player() {
  const PlayerId A{0u}, B{1u}, C{2u}, D{3u}, E{4u}, F{5u};
  return CostFunction::zero_one(
      Coalition::full(7),
      {Coalition::of({A, C}), Coalition::of({B, C}), Coalition::of({B, D, E}), Coalition::of({E, F})});
}

CostFunction five_player() {
  const PlayerId A{0u}, B{1u}, C{2u}, D{3u}, E{4u};
  return CostFunction::zero_one(
      Coalition::full(5), {Coalition::of({A}), Coalition::of({B, D}), Coalition::of({C, E})});
}

CostFunction staircase() {
  std::vector<Rational> by_mask(4);
  by_mask[0b01] = Rational(1);
  by_mask[0b10] = Rational(2);
  by_mask[0b11] = Rational(3);
  return CostFunction::table(Coalition::full(2), std::move(by_mask));
}

}  // namespace fixtures

namespace {

// ---------------------------------------------------------------------------
// JSON helpers: every payload a witness carries is rebuilt from these, so a
// failure record is self-contained and byte-stable.

json players_json(std::span<const PlayerId> seq) {
  json a = json::array();
  for (PlayerId p : seq) a.push_back(default_player_name(p));
  return a;
}

json order_json(const ArrivalOrder& o) { return players_json(o.sequence()); }

json coalition_json(Coalition s) {
  json a = json::array();
  for (PlayerId p : s.members()) a.push_back(default_player_name(p));
  return a;
}

json game_json(const CostFunction& c) { return game_spec::to_json(c, {}); }

Rational share_of(const AllocationVector& v, PlayerId p) {
  return p.index < v.shares.size() ? v.shares[p.index] : Rational(0);
}

json step_json(const AllocationVector& st) {
  json shares = json::object();
  for (PlayerId p : st.arrived.members()) shares[default_player_name(p)] = share_of(st, p).str();
  return json{{"arrived", coalition_json(st.arrived)}, {"shares", shares}};
}

json trace_json(const AllocationTrace& tr) {
  json a = json::array();
  for (const auto& st : tr.steps) a.push_back(step_json(st));
  return a;
}

json image_json(const ImageOrdering& img) {
  json o = json::object();
  o["sequence"] = players_json(img.sequence);
  if (img.marginal) o["marginal"] = default_player_name(*img.marginal);
  if (img.related) o["related"] = default_player_name(*img.related);
  o["la"] = players_json(img.la_players());
  return o;
}

json decomposition_json(const Decomposition& d) {
  json a = json::array();
  for (const auto& comp : d.components) {
    json sets = json::array();
    for (Coalition m : comp.game.minimal_sets()) sets.push_back(coalition_json(m));
    a.push_back(json{{"minimal_sets", sets}, {"weight", comp.weight.str()}});
  }
  return a;
}

PropertyReport make_report(std::string property, const SourcedGame& sg,
                           const json& extra = json::object()) {
  PropertyReport r;
  r.property = std::move(property);
  r.instance_key = sg.key;
  r.instance = json{{"key", sg.key}, {"game", game_json(sg.game)}};
  for (auto it = extra.begin(); it != extra.end(); ++it) r.instance[it.key()] = it.value();
  return r;
}

void fail(PropertyReport& r, std::string description, json payload) {
  ++r.failures;
  if (!r.witness) r.witness = Witness{std::move(description), std::move(payload)};
}

// Players of `seq` up to and including p.
Coalition up_to_in(std::span<const PlayerId> seq, PlayerId p) {
  Coalition s;
  for (PlayerId q : seq) {
    s = s.with(q);
    if (q == p) return s;
  }
  throw std::logic_error("up_to_in: player not present in sequence");
}

std::string padded_key(const char* prefix, int n, std::size_t idx) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%04zu-n%d", prefix, idx, n);
  return buf;
}

std::vector<PlayerId> ids(std::initializer_list<unsigned> idxs) {
  std::vector<PlayerId> v;
  v.reserve(idxs.size());
  for (unsigned u : idxs) v.emplace_back(u);
  return v;
}

std::optional<MechanismKind> mechanism_from_name(std::string_view s) {
  if (s == "sfs") return MechanismKind::SFS;
  if (s == "gsfs") return MechanismKind::GSFS;
  if (s == "egsfs") return MechanismKind::EGSFS;
  return std::nullopt;
}

bool opt_is(const std::optional<PlayerId>& o, int idx) {
  return idx < 0 ? !o.has_value() : (o.has_value() && o->index == static_cast<unsigned>(idx));
}

}  // namespace

// ---------------------------------------------------------------------------
// Game sources

std::vector<SourcedGame> exhaustive_games(int n) {
  std::vector<CostFunction> games = enumerate_monotone_01(n);
  std::vector<SourcedGame> out;
  out.reserve(games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    out.push_back({padded_key("x", n, i), std::move(games[i])});
  }
  return out;
}

std::vector<SourcedGame> random_monotone_games(const RandomGamesSpec& spec) {
  if (spec.max_players < 1 || spec.max_players > 7) {
    throw std::invalid_argument("random games need max_players in [1, 7]");
  }
  if (spec.count < 0) throw std::invalid_argument("random games need a non-negative count");
  if (spec.max_value < 1) throw std::invalid_argument("random games need max_value >= 1");

  // mt19937_64 plus modulo is fully specified by the standard, so the same
  // spec yields byte-identical games on every platform. Mild modulo bias is
  // irrelevant here: the draw only needs determinism, not uniformity.
  std::mt19937_64 rng(spec.seed);
  std::vector<SourcedGame> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int g = 0; g < spec.count; ++g) {
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.max_players));
    const std::uint32_t limit = 1u << n;
    std::vector<Rational> by_mask(limit);
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      by_mask[mask] =
          Rational(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(spec.max_value + 1)));
    }
    // Monotone closure: lift every subset to at least the maximum over its
    // immediate subsets. Ascending mask order makes one pass sufficient.
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
        const std::uint32_t below = mask ^ (bits & ~(bits - 1));
        if (by_mask[below] > by_mask[mask]) by_mask[mask] = by_mask[below];
      }
    }
    out.push_back({padded_key("rnd", n, static_cast<std::size_t>(g)),
                   CostFunction::table(Coalition::full(n), std::move(by_mask))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shuffle properties

std::vector<PropertyReport> check_shuffle_properties(const SourcedGame& sg,
                                                     const CoordinateRule& cd) {
  const CostFunction& c = sg.game;
  const Coalition N = c.universe();
  if (N.size() > 7) throw std::length_error("shuffle property checks are capped at 7 players");
  if (!c.is_zero_one()) {
    throw std::invalid_argument("shuffle properties are defined for 0-1 valued games");
  }

  const json ctx{{"cd", std::string(cd.name())}};
  PropertyReport bij = make_report("bijectivity", sg, ctx);
  PropertyReport prefix_comm = make_report("prefix-commutation", sg, ctx);
  PropertyReport roundtrip = make_report("inversion-roundtrip", sg, ctx);
  PropertyReport group_mono = make_report("group-size-monotonicity", sg, ctx);
  PropertyReport flip_mono = make_report("flip-monotonicity", sg, ctx);
  PropertyReport late_before = make_report("late-arrivals-precede-marginal", sg, ctx);
  PropertyReport related_prefix = make_report("related-prefix-containment", sg, ctx);
  // Only the reverse rule claims equivalence with the literal description
  // "insert the newcomer right before her predecessor when she cannot be
  // made marginal"; asserting it pins down that the block insertion at the
  // front realizes exactly that.
  std::optional<PropertyReport> front_ref;
  if (&cd == &reverse_rule()) front_ref = make_report("front-insertion-agreement", sg, ctx);

  for_each_subset(N, [&](Coalition S) {
    const auto orders = all_orders(S);
    std::map<std::vector<PlayerId>, std::size_t> image_to_order;

    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      const ArrivalOrder& order = orders[oi];

      // One incremental walk yields the image after every arrival.
      std::vector<ImageOrdering> step_images;
      step_images.reserve(order.size());
      {
        ShuffleState st(c);
        for (PlayerId p : order) {
          st.insert_next(p, cd);
          step_images.push_back(st.image());
        }
      }
      const ImageOrdering img = order.empty() ? ImageOrdering{} : step_images.back();

      // Bijectivity: the image is an ordering of S, distinct across orders.
      ++bij.checked;
      const bool is_perm =
          img.sequence.size() == static_cast<std::size_t>(S.size()) &&
          Coalition::of(std::span<const PlayerId>(img.sequence)) == S;
      if (!is_perm) {
        fail(bij, "image is not an ordering of the arrived players",
             json{{"order", order_json(order)}, {"image", players_json(img.sequence)}});
      } else if (auto [it, inserted] = image_to_order.try_emplace(img.sequence, oi); !inserted) {
        fail(bij, "two arrival orders map to the same image",
             json{{"order_a", order_json(orders[it->second])},
                  {"order_b", order_json(order)},
                  {"image", players_json(img.sequence)}});
      }

      // Prefix commutation: restricting the final image to the players of
      // any arrival prefix reproduces that prefix's own image. (Checking
      // against the final image suffices: restriction composes.)
      for (std::size_t k = 1; k < order.size(); ++k) {
        ++prefix_comm.checked;
        const Coalition pre_players = order.prefix(k).players();
        std::vector<PlayerId> filtered;
        filtered.reserve(k);
        for (PlayerId p : img.sequence) {
          if (pre_players.contains(p)) filtered.push_back(p);
        }
        if (filtered != step_images[k - 1].sequence) {
          fail(prefix_comm, "the final image restricted to a prefix differs from the prefix image",
               json{{"order", order_json(order)},
                    {"prefix_len", k},
                    {"prefix_image", players_json(step_images[k - 1].sequence)},
                    {"restricted_final", players_json(filtered)}});
        }
      }

      // Inversion round trip, including the latest-first identification.
      ++roundtrip.checked;
      const InversionResult inv = invert(img.sequence, c, cd);
      const std::vector<PlayerId> reversed(order.sequence().rbegin(), order.sequence().rend());
      if (inv.arrival != order) {
        fail(roundtrip, "inversion does not reconstruct the arrival order",
             json{{"order", order_json(order)},
                  {"image", players_json(img.sequence)},
                  {"reconstructed", order_json(inv.arrival)}});
      } else if (inv.identified_latest_first != reversed) {
        fail(roundtrip, "inversion identifies players out of reverse-arrival order",
             json{{"order", order_json(order)},
                  {"identified", players_json(inv.identified_latest_first)}});
      }

      // Group-size monotonicity: the final marginal player is marginal in
      // every arrival prefix that contains her.
      if (img.marginal) {
        const PlayerId m = *img.marginal;
        const std::size_t mpos = *order.position_of(m);
        for (std::size_t k = mpos + 1; k <= order.size(); ++k) {
          ++group_mono.checked;
          const auto& pre = step_images[k - 1];
          if (!(pre.marginal && *pre.marginal == m)) {
            fail(group_mono, "final marginal player is not marginal in a containing prefix",
                 json{{"order", order_json(order)},
                      {"player", default_player_name(m)},
                      {"prefix_len", k},
                      {"prefix_image", image_json(pre)},
                      {"final_image", image_json(img)}});
          }
        }
      }

      // Flip monotonicity: if the marginal player moves one position later
      // in the arrival order, she stays marginal.
      if (img.marginal) {
        if (auto mp = order.position_of(*img.marginal); mp && *mp + 1 < order.size()) {
          ++flip_mono.checked;
          auto seq = order.sequence();
          std::swap(seq[*mp], seq[*mp + 1]);
          const ArrivalOrder delayed(std::move(seq));
          const ImageOrdering img1 = shuffle(delayed, c, cd);
          if (!(img1.marginal && *img1.marginal == *img.marginal)) {
            fail(flip_mono, "delaying the marginal player by one position sheds her marginal status",
                 json{{"earlier", order_json(order)},
                      {"delayed", order_json(delayed)},
                      {"player", default_player_name(*img.marginal)},
                      {"image_earlier", image_json(img)},
                      {"image_delayed", image_json(img1)}});
          }
        }
      }

      // Late arrivals precede the marginal player: whoever is marginal at
      // her own arrival ends up after all later arrivals in the final image.
      for (std::size_t t = 0; t < order.size(); ++t) {
        const PlayerId i = order[t];
        const auto& at_arrival = step_images[t];
        if (!(at_arrival.marginal && *at_arrival.marginal == i)) continue;
        for (std::size_t u = t + 1; u < order.size(); ++u) {
          ++late_before.checked;
          const PlayerId j = order[u];
          const auto pi = img.position_of(i);
          const auto pj = img.position_of(j);
          if (!pi || !pj || !(*pj < *pi)) {
            fail(late_before, "a later arrival does not precede the at-arrival marginal player",
                 json{{"order", order_json(order)},
                      {"marginal_at_arrival", default_player_name(i)},
                      {"later_arrival", default_player_name(j)},
                      {"final_image", players_json(img.sequence)}});
          }
        }
      }

      // Related-player prefix containment under a last-two flip: with i
      // marginal both ways and both related players defined, the players up
      // to the related player when i arrives last, minus the flipped player,
      // are contained in the players up to the related player when i
      // arrives second to last.
      if (order.size() >= 2) {
        const std::size_t last = order.size() - 1;
        const PlayerId i = order[last];
        const PlayerId j = order[last - 1];
        auto seq2 = order.sequence();
        std::swap(seq2[last - 1], seq2[last]);
        const ArrivalOrder flipped(std::move(seq2));
        const ImageOrdering img2 = shuffle(flipped, c, cd);
        const bool i_marginal_both =
            img.marginal && *img.marginal == i && img2.marginal && *img2.marginal == i;
        if (i_marginal_both && img.related && img2.related) {
          ++related_prefix.checked;
          const Coalition p1 = up_to_in(img.sequence, *img.related).without(j);
          const Coalition p2 = up_to_in(img2.sequence, *img2.related);
          if (!p1.subset_of(p2)) {
            fail(related_prefix, "related-player prefix escapes containment under a last-two flip",
                 json{{"order_i_last", order_json(order)},
                      {"order_i_earlier", order_json(flipped)},
                      {"image_i_last", image_json(img)},
                      {"image_i_earlier", image_json(img2)},
                      {"prefix_minus_flipped", coalition_json(p1)},
                      {"prefix_earlier", coalition_json(p2)}});
          }
        }
      }

      // Literal front-insertion reference (reverse rule only): recompute the
      // image with the plain description — make the newcomer marginal at the
      // earliest slot if possible, otherwise insert her directly before her
      // arrival predecessor — and demand agreement after every arrival.
      if (front_ref) {
        ++front_ref->checked;
        std::vector<PlayerId> ref;
        for (std::size_t t = 0; t < order.size(); ++t) {
          const PlayerId p = order[t];
          std::optional<std::size_t> slot;
          Coalition pre;
          for (std::size_t k = 0; k <= ref.size(); ++k) {
            if (c.evaluate(pre).is_zero() && c.evaluate(pre.with(p)) == Rational(1)) {
              slot = k;
              break;
            }
            if (k < ref.size()) pre = pre.with(ref[k]);
          }
          if (slot) {
            ref.insert(ref.begin() + static_cast<std::ptrdiff_t>(*slot), p);
          } else if (t == 0) {
            ref.push_back(p);
          } else {
            const auto at = std::find(ref.begin(), ref.end(), order[t - 1]);
            ref.insert(at, p);
          }
          if (ref != step_images[t].sequence) {
            fail(*front_ref, "engine image differs from the literal front-insertion description",
                 json{{"order", order_json(order)},
                      {"step", t},
                      {"engine", players_json(step_images[t].sequence)},
                      {"reference", players_json(ref)}});
            break;
          }
        }
      }
    }
  });

  std::vector<PropertyReport> out{std::move(bij),        std::move(prefix_comm),
                                  std::move(roundtrip),  std::move(group_mono),
                                  std::move(flip_mono),  std::move(late_before),
                                  std::move(related_prefix)};
  if (front_ref) out.push_back(std::move(*front_ref));
  return out;
}

// ---------------------------------------------------------------------------
// Mechanism properties

std::vector<PropertyReport> check_mechanism_properties(const SourcedGame& sg,
                                                       const MechanismConfig& config) {
  const CostFunction& c = sg.game;
  const Coalition N = c.universe();
  const int n = N.size();
  if (n > 7) throw std::length_error("mechanism property checks are capped at 7 players");

  const json ctx{{"mechanism", std::string(mechanism_name(config.kind))},
                 {"cd", std::string(cd_name(config.cd))}};
  PropertyReport budget = make_report("budget-balance", sg, ctx);
  PropertyReport nonneg = make_report("non-negativity", sg, ctx);
  PropertyReport oir = make_report("oir", sg, ctx);
  PropertyReport sf = make_report("sf", sg, ctx);
  PropertyReport i4ea_adj = make_report("i4ea-adjacent", sg, ctx);
  PropertyReport i4ea_gen = make_report("i4ea-general", sg, ctx);
  PropertyReport i4ea_agree = make_report("i4ea-form-agreement", sg, ctx);

  if (n > 0) {
    const auto orders = all_orders(N);
    std::vector<AllocationTrace> traces;
    traces.reserve(orders.size());
    std::map<std::vector<PlayerId>, std::size_t> order_index;
    for (std::size_t k = 0; k < orders.size(); ++k) {
      traces.push_back(allocate_stream(c, orders[k], config, /*cross_check=*/true));
      order_index.emplace(orders[k].sequence(), k);
    }

    for (std::size_t k = 0; k < orders.size(); ++k) {
      const ArrivalOrder& ord = orders[k];
      const AllocationTrace& tr = traces[k];

      // Budget balance and non-negativity at every prefix.
      for (std::size_t s = 0; s < tr.steps.size(); ++s) {
        ++budget.checked;
        const AllocationVector& st = tr.steps[s];
        const Rational want = c.evaluate(st.arrived);
        const Rational got = st.total();
        if (got != want) {
          fail(budget, "step total differs from the cost of the arrived set",
               json{{"order", order_json(ord)},
                    {"step", s},
                    {"total", got.str()},
                    {"cost", want.str()},
                    {"trace", trace_json(tr)}});
        }
        for (PlayerId p : st.arrived.members()) {
          ++nonneg.checked;
          if (share_of(st, p).is_negative()) {
            fail(nonneg, "negative share",
                 json{{"order", order_json(ord)},
                      {"step", s},
                      {"player", default_player_name(p)},
                      {"share", share_of(st, p).str()},
                      {"trace", trace_json(tr)}});
          }
        }
      }

      // OIR: a player's share never grows as further players arrive.
      for (std::size_t s = 0; s + 1 < tr.steps.size(); ++s) {
        for (PlayerId p : tr.steps[s].arrived.members()) {
          ++oir.checked;
          const Rational before = share_of(tr.steps[s], p);
          const Rational after = share_of(tr.steps[s + 1], p);
          if (after > before) {
            fail(oir, "share increased when another player arrived",
                 json{{"order", order_json(ord)},
                      {"player", default_player_name(p)},
                      {"step", s + 1},
                      {"before", before.str()},
                      {"after", after.str()},
                      {"trace", trace_json(tr)}});
          }
        }
      }
    }

    // SF: summed over all |N|! orders, final shares hit |N|! times the
    // Shapley value exactly.
    const ShareVector sv = shapley_oracle(c);
    const Rational scale(static_cast<std::int64_t>(factorial(n)));
    for (PlayerId p : N.members()) {
      ++sf.checked;
      Rational sum;
      for (const AllocationTrace& tr : traces) sum += share_of(tr.final(), p);
      const Rational want = scale * sv[p.index];
      if (sum != want) {
        fail(sf, "order-sum of final shares misses the scaled Shapley value",
             json{{"player", default_player_name(p)},
                  {"sum_over_orders", sum.str()},
                  {"expected", want.str()}});
      }
    }

    // I4EA, adjacent form: moving any player one position later in the
    // arrival order never lowers that player's final share.
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const ArrivalOrder& ord = orders[k];
      for (std::size_t t = 0; t + 1 < ord.size(); ++t) {
        ++i4ea_adj.checked;
        const PlayerId i = ord[t];
        auto seq = ord.sequence();
        std::swap(seq[t], seq[t + 1]);
        const Rational early = share_of(traces[k].final(), i);
        const Rational late = share_of(traces[order_index.at(seq)].final(), i);
        if (late < early) {
          fail(i4ea_adj, "arriving one position earlier yields a larger final share",
               json{{"earlier", order_json(ord)},
                    {"delayed", players_json(seq)},
                    {"player", default_player_name(i)},
                    {"share_earlier", early.str()},
                    {"share_delayed", late.str()}});
        }
      }
    }

    // I4EA, general form: delaying past any number of players (everyone
    // else's relative order fixed) never lowers the delayed player's share.
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const ArrivalOrder& ord = orders[k];
      for (std::size_t t = 0; t < ord.size(); ++t) {
        const PlayerId i = ord[t];
        const Rational early = share_of(traces[k].final(), i);
        auto reduced = ord.sequence();
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(t));
        for (std::size_t q = t + 1; q < ord.size(); ++q) {
          ++i4ea_gen.checked;
          auto seq = reduced;
          seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(q), i);
          const Rational late = share_of(traces[order_index.at(seq)].final(), i);
          if (late < early) {
            fail(i4ea_gen, "arriving earlier yields a larger final share",
                 json{{"earlier", order_json(ord)},
                      {"delayed", players_json(seq)},
                      {"player", default_player_name(i)},
                      {"delayed_past", q - t},
                      {"share_earlier", early.str()},
                      {"share_delayed", late.str()}});
          }
        }
      }
    }

    // The adjacent form is usually quoted as equivalent to the general one;
    // test that equivalence instead of assuming it.
    ++i4ea_agree.checked;
    if ((i4ea_adj.failures == 0) != (i4ea_gen.failures == 0)) {
      fail(i4ea_agree, "adjacent-flip and general-delay forms disagree on this game",
           json{{"adjacent_failures", i4ea_adj.failures},
                {"general_failures", i4ea_gen.failures}});
    }
  }

  std::vector<PropertyReport> out;
  out.reserve(7);
  out.push_back(std::move(budget));
  out.push_back(std::move(nonneg));
  out.push_back(std::move(oir));
  out.push_back(std::move(sf));
  out.push_back(std::move(i4ea_adj));
  out.push_back(std::move(i4ea_gen));
  out.push_back(std::move(i4ea_agree));
  return out;
}

// On 0-1 valued games the decomposition route must collapse to the direct
// 0-1 allocation: the only component is the game itself with weight 1.
PropertyReport check_general_01_agreement(const SourcedGame& sg, CdKind cd) {
  const CostFunction& c = sg.game;
  if (!c.is_zero_one()) {
    throw std::invalid_argument("general-01 agreement is defined for 0-1 valued games");
  }
  if (c.player_count() > 7) {
    throw std::length_error("mechanism property checks are capped at 7 players");
  }
  PropertyReport r = make_report("general-01-agreement", sg, json{{"cd", std::string(cd_name(cd))}});
  const CoordinateRule& rule = rule_for(cd);
  for (const ArrivalOrder& ord : all_orders(c.universe())) {
    ++r.checked;
    const AllocationTrace direct = allocate_01_stream(c, ord, rule, /*cross_check=*/true);
    const AllocationTrace general = allocate_general_stream(c, ord, rule);
    bool equal = direct.steps.size() == general.steps.size();
    for (std::size_t s = 0; equal && s < direct.steps.size(); ++s) {
      equal = direct.steps[s].arrived == general.steps[s].arrived;
      if (equal) {
        for (PlayerId p : direct.steps[s].arrived.members()) {
          if (share_of(direct.steps[s], p) != share_of(general.steps[s], p)) {
            equal = false;
            break;
          }
        }
      }
    }
    if (!equal) {
      fail(r, "decomposition-based allocation diverges from the direct 0-1 allocation",
           json{{"order", order_json(ord)},
                {"direct", trace_json(direct)},
                {"general", trace_json(general)}});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Decomposition properties

std::vector<PropertyReport> check_decomposition_properties(const SourcedGame& sg) {
  const CostFunction& c = sg.game;
  const Coalition N = c.universe();
  if (N.size() > 7) throw std::length_error("decomposition checks are capped at 7 players");

  PropertyReport roundtrip = make_report("decomposition-roundtrip", sg);
  PropertyReport prefix_cons = make_report("decomposition-prefix-consistency", sg);

  std::vector<std::optional<Decomposition>> memo(std::size_t(1) << N.ambient_size());
  const auto decomposition_of = [&](Coalition s) -> const Decomposition& {
    auto& slot = memo[s.bits()];
    if (!slot) slot = decompose(c.restricted(s));
    return *slot;
  };
  using ComponentMap = std::map<std::vector<Coalition>, Rational>;
  const auto as_map = [](const Decomposition& d) {
    ComponentMap m;
    for (const auto& comp : d.components) m[comp.game.minimal_sets()] += comp.weight;
    return m;
  };

  for_each_subset(N, [&](Coalition s) {
    const Decomposition& ds = decomposition_of(s);

    // Exact reconstruction on every restriction of the game.
    ++roundtrip.checked;
    const DecompositionReport rep = verify_decomposition(c.restricted(s), ds);
    if (!rep.ok()) {
      fail(roundtrip, "decomposition fails verification on a restriction",
           json{{"restriction", coalition_json(s)},
                {"decomposition", decomposition_json(ds)},
                {"issues", rep.summary()}});
    }

    // Restricting the components of a larger prefix's decomposition and
    // merging equal ones must reproduce the smaller prefix's decomposition
    // (constant-zero components drop out). This is the alignment the online
    // mechanism leans on when it recomputes the decomposition per prefix.
    for_each_subset(s, [&](Coalition t) {
      if (t == s) return;
      ++prefix_cons.checked;
      ComponentMap merged;
      for (const auto& comp : ds.components) {
        CostFunction r = comp.game.restricted(t);
        if (r.minimal_sets().empty()) continue;
        merged[r.minimal_sets()] += comp.weight;
      }
      const ComponentMap expect = as_map(decomposition_of(t));
      if (merged != expect) {
        fail(prefix_cons, "restricted decomposition does not merge into the smaller prefix's",
             json{{"outer", coalition_json(s)},
                  {"inner", coalition_json(t)},
                  {"outer_decomposition", decomposition_json(ds)},
                  {"inner_decomposition", decomposition_json(decomposition_of(t))}});
      }
    });
  });

  std::vector<PropertyReport> out;
  out.push_back(std::move(roundtrip));
  out.push_back(std::move(prefix_cons));
  return out;
}

// ---------------------------------------------------------------------------
// Coordinate-rule vetting

namespace {

class ParityDemoRule final : public CoordinateRule {
 public:
  std::string_view name() const override { return "parity-demo"; }

  std::size_t insertion_index(std::span<const PlayerId> block, std::span<const PlayerId>,
                              PlayerId newcomer) const override {
    return newcomer.index % 2 == 0 ? 0 : block.size();
  }

  std::vector<PlayerId> block_arrivals(std::span<const PlayerId> block) const override {
    // Knowingly wrong: parity insertion is not injective, so no inverse
    // exists; returning the block unchanged lets the checks demonstrate
    // exactly how a broken rule gets caught.
    return {block.begin(), block.end()};
  }
};

}  // namespace

const CoordinateRule& parity_demo_rule() {
  static const ParityDemoRule rule;
  return rule;
}

const CoordinateRule* rule_by_name(std::string_view name) {
  if (name == reverse_rule().name()) return &reverse_rule();
  if (name == arrival_rule().name()) return &arrival_rule();
  if (name == parity_demo_rule().name()) return &parity_demo_rule();
  return nullptr;
}

std::vector<PropertyReport> check_coordinate_rule(const CoordinateRule& cd, int n) {
  if (n < 0 || n > 7) throw std::length_error("coordinate-rule checks are capped at 7 players");

  const json inst{{"key", std::string(cd.name())}, {"cd", std::string(cd.name())}, {"n", n}};
  const auto rule_report = [&](const char* property) {
    PropertyReport r;
    r.property = property;
    r.instance_key = std::string(cd.name());
    r.instance = inst;
    return r;
  };
  PropertyReport bij = rule_report("cd-bijectivity");
  PropertyReport prefix_comm = rule_report("cd-prefix-commutation");
  PropertyReport inverse = rule_report("cd-inversion");

  // Realize the rule with no cost function in play: every arrival is a
  // plain block insertion at the index the rule picks.
  const auto realize = [&](const ArrivalOrder& ord, std::vector<std::vector<PlayerId>>& steps) {
    std::vector<PlayerId> block;
    steps.clear();
    for (std::size_t k = 0; k < ord.size(); ++k) {
      const std::span<const PlayerId> arrivals(ord.sequence().data(), k);
      std::size_t at = cd.insertion_index(block, arrivals, ord[k]);
      if (at > block.size()) {
        fail(bij, "rule returned an insertion index beyond the block",
             json{{"order", order_json(ord)}, {"step", k}, {"index", at}});
        at = block.size();
      }
      block.insert(block.begin() + static_cast<std::ptrdiff_t>(at), ord[k]);
      steps.push_back(block);
    }
    return block;
  };

  for_each_subset(Coalition::full(n), [&](Coalition S) {
    const auto orders = all_orders(S);
    std::map<std::vector<PlayerId>, std::size_t> image_to_order;
    std::vector<std::vector<PlayerId>> steps;
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      const ArrivalOrder& ord = orders[oi];
      const std::vector<PlayerId> block = realize(ord, steps);

      ++bij.checked;
      if (auto [it, inserted] = image_to_order.try_emplace(block, oi); !inserted) {
        fail(bij, "two arrival orders realize the same block",
             json{{"order_a", order_json(orders[it->second])},
                  {"order_b", order_json(ord)},
                  {"block", players_json(block)}});
      }

      for (std::size_t k = 1; k < ord.size(); ++k) {
        ++prefix_comm.checked;
        const Coalition pre_players = ord.prefix(k).players();
        std::vector<PlayerId> filtered;
        for (PlayerId p : block) {
          if (pre_players.contains(p)) filtered.push_back(p);
        }
        if (filtered != steps[k - 1]) {
          fail(prefix_comm, "the final block restricted to a prefix differs from the prefix block",
               json{{"order", order_json(ord)},
                    {"prefix_len", k},
                    {"prefix_block", players_json(steps[k - 1])},
                    {"restricted_final", players_json(filtered)}});
        }
      }

      ++inverse.checked;
      const std::vector<PlayerId> back = cd.block_arrivals(block);
      if (back != ord.sequence()) {
        fail(inverse, "block_arrivals does not invert the realized insertions",
             json{{"order", order_json(ord)},
                  {"block", players_json(block)},
                  {"recovered", players_json(back)}});
      }
    }
  });

  std::vector<PropertyReport> out;
  out.push_back(std::move(bij));
  out.push_back(std::move(prefix_comm));
  out.push_back(std::move(inverse));
  return out;
}

// ---------------------------------------------------------------------------
// Golden jobs: frozen worked-example values, every one an exact comparison.

namespace {

using Job = std::function<std::vector<PropertyReport>()>;

std::vector<PropertyReport> golden_trace_job() {
  const SourcedGame sg{"seven-player", fixtures::seven_player()};
  PropertyReport r = make_report("golden-shuffle-trace", sg, json{{"cd", "reverse"}});

  const ArrivalOrder order = ArrivalOrder::of({0, 1, 2, 3, 4, 5, 6});
  const std::vector<std::vector<PlayerId>> want = {
      ids({0}),
      ids({1, 0}),
      ids({1, 2, 0}),
      ids({1, 3, 2, 0}),
      ids({1, 3, 4, 2, 0}),
      ids({1, 3, 5, 4, 2, 0}),
      ids({1, 3, 6, 5, 4, 2, 0}),
  };
  const int want_marginal[7] = {-1, -1, 2, 2, 4, 4, 4};
  const int want_related[7] = {-1, -1, 1, 1, 3, 3, 3};

  ShuffleState st(sg.game);
  for (std::size_t k = 0; k < order.size(); ++k) {
    st.insert_next(order[k], reverse_rule());
    ++r.checked;
    const ImageOrdering& img = st.image();
    if (img.sequence != want[k] || !opt_is(img.marginal, want_marginal[k]) ||
        !opt_is(img.related, want_related[k])) {
      fail(r, "image after an arrival differs from the frozen trace",
           json{{"step", k + 1},
                {"got", image_json(img)},
                {"want", players_json(want[k])}});
    }
  }

  // Final shares: E owes 1, everyone else 0.
  const AllocationTrace tr =
      allocate_stream(sg.game, order, MechanismConfig::sfs(), /*cross_check=*/true);
  ++r.checked;
  bool shares_ok = true;
  for (PlayerId p : sg.game.universe().members()) {
    if (share_of(tr.final(), p) != Rational(p.index == 4 ? 1 : 0)) shares_ok = false;
  }
  if (!shares_ok) {
    fail(r, "final shares differ from the frozen allocation",
         json{{"final", step_json(tr.final())}});
  }
  return {std::move(r)};
}

std::vector<PropertyReport> golden_inversion_job() {
  const SourcedGame sg{"seven-player", fixtures::seven_player()};
  PropertyReport r = make_report("golden-inversion", sg, json{{"cd", "reverse"}});

  const std::vector<PlayerId> image = ids({1, 3, 6, 5, 4, 2, 0});
  const InversionResult inv = invert(image, sg.game, reverse_rule());
  ++r.checked;
  if (inv.arrival != ArrivalOrder::of({0, 1, 2, 3, 4, 5, 6})) {
    fail(r, "inversion does not reconstruct the frozen arrival order",
         json{{"image", players_json(image)}, {"reconstructed", order_json(inv.arrival)}});
  }
  ++r.checked;
  if (inv.identified_latest_first != ids({6, 5, 4, 3, 2, 1, 0})) {
    fail(r, "inversion identifies players out of the frozen order",
         json{{"image", players_json(image)},
              {"identified", players_json(inv.identified_latest_first)}});
  }
  return {std::move(r)};
}

std::vector<PropertyReport> golden_payers_job() {
  const SourcedGame sg{"or-single-pair", fixtures::or_single_pair()};
  PropertyReport r =
      make_report("golden-payer-counts", sg, json{{"cd", "reverse"}, {"mechanism", "sfs"}});

  const ImageOrdering img = shuffle(ArrivalOrder::of({0, 1, 2}), sg.game, reverse_rule());
  ++r.checked;
  if (img.sequence != ids({1, 2, 0}) || !opt_is(img.marginal, 2) || !opt_is(img.related, 1)) {
    fail(r, "shuffle of the canonical order differs from the frozen image",
         json{{"got", image_json(img)}});
  }

  // Over all six orders the final payments per player are exactly (4, 1, 1),
  // which is 3! times the Shapley value (2/3, 1/6, 1/6).
  ShareVector totals(3);
  for (const ArrivalOrder& ord : all_orders(sg.game.universe())) {
    const AllocationTrace tr =
        allocate_stream(sg.game, ord, MechanismConfig::sfs(), /*cross_check=*/true);
    for (PlayerId p : sg.game.universe().members()) {
      totals[p.index] += share_of(tr.final(), p);
    }
  }
  ++r.checked;
  if (!(totals[0] == Rational(4) && totals[1] == Rational(1) && totals[2] == Rational(1))) {
    fail(r, "order-summed payments differ from the frozen totals",
         json{{"totals", json::array({totals[0].str(), totals[1].str(), totals[2].str()})}});
  }

  const ShareVector sv = shapley_oracle(sg.game);
  ++r.checked;
  if (!(sv[0] == Rational(2, 3) && sv[1] == Rational(1, 6) && sv[2] == Rational(1, 6))) {
    fail(r, "Shapley oracle differs from the frozen values",
         json{{"oracle", json::array({sv[0].str(), sv[1].str(), sv[2].str()})}});
  }
  ++r.checked;
  for (PlayerId p : sg.game.universe().members()) {
    if (totals[p.index] != Rational(6) * sv[p.index]) {
      fail(r, "order-summed payments miss 3! times the Shapley value",
           json{{"player", default_player_name(p)},
                {"total", totals[p.index].str()},
                {"expected", (Rational(6) * sv[p.index]).str()}});
    }
  }
  return {std::move(r)};
}

std::vector<PropertyReport> golden_forced_image_job() {
  const SourcedGame sg{"single-pair", fixtures::single_pair()};
  PropertyReport r = make_report("golden-forced-image", sg, json{{"cd", "reverse"}});

  const ImageOrdering img = shuffle(ArrivalOrder::of({0, 1, 2}), sg.game, reverse_rule());
  ++r.checked;
  if (img.sequence != ids({0, 2, 1}) || !opt_is(img.marginal, 1)) {
    fail(r, "shuffle of the canonical order differs from the forced image",
         json{{"got", image_json(img)}});
  }
  // The two images that would break fairness or bijectivity never appear.
  ++r.checked;
  if (img.sequence == ids({2, 0, 1}) || img.sequence == ids({0, 1, 2})) {
    fail(r, "shuffle produced an image the construction must exclude",
         json{{"got", players_json(img.sequence)}});
  }
  return {std::move(r)};
}

std::vector<PropertyReport> golden_divergence_job() {
  const SourcedGame sg{"five-player", fixtures::five_player()};
  PropertyReport r = make_report("golden-cd-divergence", sg, json{{"mechanism", "gsfs"}});
  const ArrivalOrder order = ArrivalOrder::of({0, 1, 2, 3, 4});

  // Reverse rule: E ends up marginal and pays the single unit.
  {
    const ImageOrdering img = shuffle(order, sg.game, reverse_rule());
    ++r.checked;
    if (img.sequence != ids({2, 4, 1, 3, 0}) || !opt_is(img.marginal, 4)) {
      fail(r, "reverse-rule image differs from the frozen trace", json{{"got", image_json(img)}});
    }
    const AllocationTrace tr =
        allocate_stream(sg.game, order, MechanismConfig::gsfs(CdKind::Reverse), true);
    ++r.checked;
    for (PlayerId p : sg.game.universe().members()) {
      if (share_of(tr.final(), p) != Rational(p.index == 4 ? 1 : 0)) {
        fail(r, "reverse-rule final shares differ from the frozen allocation",
             json{{"final", step_json(tr.final())}});
        break;
      }
    }
  }

  // Arrival rule: the same order diverges after C — and E, never marginal
  // on arrival, escapes payment; D pays instead.
  {
    ShuffleState st(sg.game);
    for (std::size_t k = 0; k < 3; ++k) st.insert_next(order[k], arrival_rule());
    ++r.checked;
    if (st.image().sequence != ids({1, 2, 0})) {
      fail(r, "arrival-rule image after three arrivals differs from the frozen trace",
           json{{"got", image_json(st.image())}});
    }
    st.insert_next(order[3], arrival_rule());
    st.insert_next(order[4], arrival_rule());
    ++r.checked;
    if (st.image().sequence != ids({1, 4, 3, 2, 0}) || !opt_is(st.image().marginal, 3)) {
      fail(r, "arrival-rule final image differs from the frozen trace",
           json{{"got", image_json(st.image())}});
    }
    const AllocationTrace tr =
        allocate_stream(sg.game, order, MechanismConfig::gsfs(CdKind::Arrival), true);
    ++r.checked;
    for (PlayerId p : sg.game.universe().members()) {
      if (share_of(tr.final(), p) != Rational(p.index == 3 ? 1 : 0)) {
        fail(r, "arrival-rule final shares differ from the frozen allocation",
             json{{"final", step_json(tr.final())}});
        break;
      }
    }
  }
  return {std::move(r)};
}

std::vector<PropertyReport> golden_staircase_job() {
  const SourcedGame sg{"staircase", fixtures::staircase()};
  std::vector<PropertyReport> out;

  {
    PropertyReport r = make_report("golden-decomposition", sg);
    const Decomposition d = decompose(sg.game);
    const PlayerId A{0u}, B{1u};
    ++r.checked;
    const bool structure_ok =
        d.components.size() == 3 &&
        d.components[0].game.minimal_sets() ==
            std::vector<Coalition>{Coalition::of({A}), Coalition::of({B})} &&
        d.components[0].weight == Rational(1) &&
        d.components[1].game.minimal_sets() == std::vector<Coalition>{Coalition::of({B})} &&
        d.components[1].weight == Rational(1) &&
        d.components[2].game.minimal_sets() == std::vector<Coalition>{Coalition::of({A, B})} &&
        d.components[2].weight == Rational(1);
    if (!structure_ok) {
      fail(r, "level-set decomposition differs from the frozen components",
           json{{"got", decomposition_json(d)}});
    }
    ++r.checked;
    if (const DecompositionReport rep = verify_decomposition(sg.game, d); !rep.ok()) {
      fail(r, "frozen decomposition fails verification", json{{"issues", rep.summary()}});
    }
    const ShareVector sv = shapley_oracle(sg.game);
    ++r.checked;
    if (!(sv[0] == Rational(1) && sv[1] == Rational(2))) {
      fail(r, "Shapley oracle differs from the frozen values",
           json{{"oracle", json::array({sv[0].str(), sv[1].str()})}});
    }
    out.push_back(std::move(r));
  }

  {
    PropertyReport r = make_report("golden-general-trace", sg,
                                   json{{"mechanism", "egsfs"}, {"cd", "reverse"}});
    const auto expect = [&](const AllocationTrace& tr, std::size_t step,
                            std::initializer_list<std::pair<unsigned, Rational>> want,
                            const char* which) {
      ++r.checked;
      Coalition listed;
      bool ok = step < tr.steps.size();
      if (ok) {
        for (const auto& [idx, val] : want) {
          const PlayerId p{idx};
          listed = listed.with(p);
          if (!tr.steps[step].arrived.contains(p) || share_of(tr.steps[step], p) != val) ok = false;
        }
        if (listed != tr.steps[step].arrived) ok = false;
      }
      if (!ok) {
        fail(r, std::string("general allocation step differs from the frozen trace (") + which + ")",
             json{{"step", step + 1}, {"trace", trace_json(tr)}});
      }
    };

    // Order [A, B]: A pays her stand-alone cost, then B becomes marginal in
    // all three components at once and the whole cost lands on B.
    const AllocationTrace ab = allocate_stream(
        sg.game, ArrivalOrder::of({0, 1}), MechanismConfig::egsfs(CdKind::Reverse), true);
    expect(ab, 0, {{0u, Rational(1)}}, "AB");
    expect(ab, 1, {{0u, Rational(0)}, {1u, Rational(3)}}, "AB");

    // Order [B, A]: B pays 2 alone; A's arrival flips two components to A.
    const AllocationTrace ba = allocate_stream(
        sg.game, ArrivalOrder::of({1, 0}), MechanismConfig::egsfs(CdKind::Reverse), true);
    expect(ba, 0, {{1u, Rational(2)}}, "BA");
    expect(ba, 1, {{0u, Rational(2)}, {1u, Rational(1)}}, "BA");

    // The two traces together hit 2! times the Shapley value exactly.
    ++r.checked;
    const Rational sum_a = share_of(ab.final(), PlayerId{0u}) + share_of(ba.final(), PlayerId{0u});
    const Rational sum_b = share_of(ab.final(), PlayerId{1u}) + share_of(ba.final(), PlayerId{1u});
    if (!(sum_a == Rational(2) && sum_b == Rational(4))) {
      fail(r, "order-summed general shares miss 2! times the Shapley value",
           json{{"sum_a", sum_a.str()}, {"sum_b", sum_b.str()}});
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Full property sweep for one 0-1 fixture under one rule.
Job fixture_sweep_job(const char* key, CostFunction (*make)(), CdKind cd) {
  return [key, make, cd] {
    const SourcedGame sg{key, make()};
    std::vector<PropertyReport> out = check_shuffle_properties(sg, rule_for(cd));
    const MechanismConfig config =
        cd == CdKind::Reverse ? MechanismConfig::sfs() : MechanismConfig::gsfs(cd);
    std::vector<PropertyReport> mech = check_mechanism_properties(sg, config);
    out.insert(out.end(), std::make_move_iterator(mech.begin()), std::make_move_iterator(mech.end()));
    out.push_back(check_general_01_agreement(sg, cd));
    return out;
  };
}

void append_golden_jobs(std::vector<Job>& jobs) {
  jobs.emplace_back(golden_trace_job);
  jobs.emplace_back(golden_inversion_job);
  jobs.emplace_back(golden_payers_job);
  jobs.emplace_back(golden_forced_image_job);
  jobs.emplace_back(golden_divergence_job);
  jobs.emplace_back(golden_staircase_job);
  for (const CdKind cd : {CdKind::Reverse, CdKind::Arrival}) {
    jobs.push_back(fixture_sweep_job("or-single-pair", &fixtures::or_single_pair, cd));
    jobs.push_back(fixture_sweep_job("single-pair", &fixtures::single_pair, cd));
    jobs.push_back(fixture_sweep_job("five-player", &fixtures::five_player, cd));
    jobs.push_back(fixture_sweep_job("seven-player", &fixtures::seven_player, cd));
  }
  jobs.emplace_back([] {
    const SourcedGame sg{"staircase", fixtures::staircase()};
    std::vector<PropertyReport> out =
        check_mechanism_properties(sg, MechanismConfig::egsfs(CdKind::Reverse));
    std::vector<PropertyReport> arrival =
        check_mechanism_properties(sg, MechanismConfig::egsfs(CdKind::Arrival));
    out.insert(out.end(), std::make_move_iterator(arrival.begin()),
               std::make_move_iterator(arrival.end()));
    std::vector<PropertyReport> dec = check_decomposition_properties(sg);
    out.insert(out.end(), std::make_move_iterator(dec.begin()), std::make_move_iterator(dec.end()));
    return out;
  });
}

std::vector<PropertyReport> exhaustive_game_job(const SourcedGame& sg) {
  std::vector<PropertyReport> out;
  const auto append = [&out](std::vector<PropertyReport> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  append(check_shuffle_properties(sg, reverse_rule()));
  append(check_shuffle_properties(sg, arrival_rule()));
  append(check_mechanism_properties(sg, MechanismConfig::sfs()));
  append(check_mechanism_properties(sg, MechanismConfig::gsfs(CdKind::Arrival)));
  out.push_back(check_general_01_agreement(sg, CdKind::Reverse));
  out.push_back(check_general_01_agreement(sg, CdKind::Arrival));
  return out;
}

void append_suite_jobs(const SuiteSpec& spec, std::vector<Job>& jobs) {
  const std::string& name = spec.name;
  if (name == "empty") return;
  if (name == "golden") {
    append_golden_jobs(jobs);
    return;
  }
  if (name == "rules") {
    const int depth = spec.n.value_or(4);
    jobs.emplace_back([depth] { return check_coordinate_rule(reverse_rule(), depth); });
    jobs.emplace_back([depth] { return check_coordinate_rule(arrival_rule(), depth); });
    return;
  }
  if (name.size() == std::string("exhaustive-n0").size() && name.rfind("exhaustive-n", 0) == 0) {
    const char digit = name.back();
    if (digit >= '1' && digit <= '4') {
      const int depth = spec.n.value_or(digit - '0');
      for (int k = 1; k <= depth; ++k) {
        for (SourcedGame& sg : exhaustive_games(k)) {
          jobs.emplace_back([g = std::move(sg)] { return exhaustive_game_job(g); });
        }
      }
      return;
    }
  }
  if (name == "random-egsfs") {
    RandomGamesSpec rspec;
    rspec.max_players = spec.n.value_or(5);
    rspec.count = 200;
    rspec.seed = spec.seed;
    rspec.max_value = 8;
    for (SourcedGame& sg : random_monotone_games(rspec)) {
      jobs.emplace_back([g = std::move(sg)] {
        std::vector<PropertyReport> out =
            check_mechanism_properties(g, MechanismConfig::egsfs(CdKind::Reverse));
        std::vector<PropertyReport> arrival =
            check_mechanism_properties(g, MechanismConfig::egsfs(CdKind::Arrival));
        out.insert(out.end(), std::make_move_iterator(arrival.begin()),
                   std::make_move_iterator(arrival.end()));
        return out;
      });
    }
    return;
  }
  if (name == "random-decompose") {
    RandomGamesSpec rspec;
    rspec.max_players = spec.n.value_or(6);
    rspec.count = 500;
    rspec.seed = spec.seed;
    rspec.max_value = 8;
    for (SourcedGame& sg : random_monotone_games(rspec)) {
      jobs.emplace_back([g = std::move(sg)] { return check_decomposition_properties(g); });
    }
    return;
  }
  if (name == "full") {
    for (const char* sub : {"golden", "rules", "exhaustive-n4", "random-egsfs", "random-decompose"}) {
      SuiteSpec part;
      part.name = sub;
      part.seed = spec.seed;
      append_suite_jobs(part, jobs);
    }
    return;
  }
  std::string known;
  for (const std::string& s : suite_names()) {
    if (!known.empty()) known += ", ";
    known += s;
  }
  throw std::invalid_argument("unknown suite '" + name + "' (available: " + known + ")");
}

std::vector<std::vector<PropertyReport>> run_jobs(const std::vector<Job>& jobs, int threads) {
  std::vector<std::vector<PropertyReport>> results(jobs.size());
  const unsigned want =
      threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<unsigned>(threads);
  if (want <= 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  {
    std::vector<std::jthread> pool;
    const unsigned workers = std::min<std::size_t>(want, jobs.size());
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= results.size()) return;
          try {
            results[i] = jobs[i]();
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

// ---------------------------------------------------------------------------
// Suites

std::uint64_t SuiteResult::checked() const {
  std::uint64_t sum = 0;
  for (const PropertyReport& r : reports) sum += r.checked;
  return sum;
}

std::uint64_t SuiteResult::failures() const {
  std::uint64_t sum = 0;
  for (const PropertyReport& r : reports) sum += r.failures;
  return sum;
}

bool SuiteResult::passed() const {
  for (const PropertyReport& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

std::vector<std::string> suite_names() {
  return {"golden",       "rules",        "exhaustive-n1", "exhaustive-n2", "exhaustive-n3",
          "exhaustive-n4", "random-egsfs", "random-decompose", "empty", "full"};
}

SuiteResult run_suite(const SuiteSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Job> jobs;
  append_suite_jobs(spec, jobs);
  std::vector<std::vector<PropertyReport>> per_job = run_jobs(jobs, spec.threads);

  SuiteResult result;
  result.suite = spec.name;
  result.seed = spec.seed;
  for (std::vector<PropertyReport>& v : per_job) {
    result.reports.insert(result.reports.end(), std::make_move_iterator(v.begin()),
                          std::make_move_iterator(v.end()));
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

// ---------------------------------------------------------------------------
// Reports

void print_summary(std::ostream& os, const SuiteResult& result) {
  os << "suite " << result.suite << " (seed " << result.seed << ")\n";

  struct Agg {
    std::uint64_t instances = 0;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
  };
  std::map<std::string, Agg> agg;
  for (const PropertyReport& r : result.reports) {
    Agg& a = agg[r.property];
    ++a.instances;
    a.checked += r.checked;
    a.failures += r.failures;
  }
  os << "  " << std::left << std::setw(36) << "property" << std::right << std::setw(10)
     << "instances" << std::setw(12) << "checks" << std::setw(10) << "failures" << "\n";
  for (const auto& [prop, a] : agg) {
    os << "  " << std::left << std::setw(36) << prop << std::right << std::setw(10) << a.instances
       << std::setw(12) << a.checked << std::setw(10) << a.failures << "\n";
  }

  int shown = 0;
  for (const PropertyReport& r : result.reports) {
    if (r.passed()) continue;
    if (shown == 10) {
      os << "  ... further failures omitted (see the report file)\n";
      break;
    }
    ++shown;
    os << "  FAIL " << r.property << " [" << r.instance_key << "]";
    if (r.witness) {
      os << ": " << r.witness->description << "\n    witness: " << r.witness->payload.dump();
    }
    os << "\n";
  }

  std::ostringstream wall;
  wall << std::fixed << std::setprecision(2) << result.wall_seconds;
  os << (result.passed() ? "PASS" : "FAIL") << ": " << result.reports.size()
     << " property reports, " << result.checked() << " checks, " << result.failures()
     << " failures (" << wall.str() << "s)\n";
}

void write_report(std::ostream& os, const SuiteResult& result) {
  const json header{{"record", "header"},
                    {"version", 1},
                    {"format", "oncs-verify-report"},
                    {"suite", result.suite},
                    {"seed", result.seed}};
  os << header.dump() << '\n';
  for (const PropertyReport& r : result.reports) {
    json line{{"record", "result"},   {"suite", result.suite},
              {"property", r.property}, {"instance", r.instance},
              {"verdict", r.passed() ? "pass" : "fail"},
              {"checked", r.checked},  {"failures", r.failures}};
    if (r.witness) {
      line["witness"] = json{{"description", r.witness->description}, {"payload", r.witness->payload}};
    }
    os << line.dump() << '\n';
  }
  const json summary{{"record", "summary"},
                     {"suite", result.suite},
                     {"results", result.reports.size()},
                     {"checked", result.checked()},
                     {"failures", result.failures()},
                     {"verdict", result.passed() ? "pass" : "fail"}};
  os << summary.dump() << '\n';
}

// ---------------------------------------------------------------------------
// Replay

namespace {

SourcedGame game_from_instance(const json& inst) {
  const game_spec::LoadedGame loaded = game_spec::parse(inst.at("game"));
  return {inst.value("key", std::string("replay")), loaded.cost};
}

bool is_mechanism_property(const std::string& p) {
  return p == "budget-balance" || p == "non-negativity" || p == "oir" || p == "sf" ||
         p == "i4ea-adjacent" || p == "i4ea-general" || p == "i4ea-form-agreement";
}

bool is_shuffle_property(const std::string& p) {
  return p == "bijectivity" || p == "prefix-commutation" || p == "inversion-roundtrip" ||
         p == "group-size-monotonicity" || p == "flip-monotonicity" ||
         p == "late-arrivals-precede-marginal" || p == "related-prefix-containment" ||
         p == "front-insertion-agreement";
}

// Re-runs the check that produced a result record; true when it still fails
// (or cannot be replayed, which deserves the same attention).
bool record_still_fails(const json& rec, std::ostream& log) {
  const std::string prop = rec.at("property").get<std::string>();
  const json& inst = rec.at("instance");
  std::vector<PropertyReport> reports;

  if (prop.rfind("golden-", 0) == 0) {
    SuiteSpec golden;
    golden.name = "golden";
    reports = run_suite(golden).reports;
  } else if (prop.rfind("cd-", 0) == 0) {
    const CoordinateRule* rule = rule_by_name(inst.at("cd").get<std::string>());
    if (!rule) {
      log << "\n    cannot replay: unknown rule '" << inst.at("cd").get<std::string>() << "'";
      return true;
    }
    reports = check_coordinate_rule(*rule, inst.at("n").get<int>());
  } else if (prop.rfind("decomposition-", 0) == 0) {
    reports = check_decomposition_properties(game_from_instance(inst));
  } else if (prop == "general-01-agreement") {
    const auto cd = cd_from_name(inst.at("cd").get<std::string>());
    if (!cd) {
      log << "\n    cannot replay: unknown coordinate rule kind";
      return true;
    }
    reports = {check_general_01_agreement(game_from_instance(inst), *cd)};
  } else if (is_mechanism_property(prop)) {
    const auto kind = mechanism_from_name(inst.at("mechanism").get<std::string>());
    const auto cd = cd_from_name(inst.at("cd").get<std::string>());
    if (!kind || !cd) {
      log << "\n    cannot replay: unknown mechanism or rule";
      return true;
    }
    reports = check_mechanism_properties(game_from_instance(inst), MechanismConfig{*kind, *cd});
  } else if (is_shuffle_property(prop)) {
    const CoordinateRule* rule = rule_by_name(inst.at("cd").get<std::string>());
    if (!rule) {
      log << "\n    cannot replay: unknown rule '" << inst.at("cd").get<std::string>() << "'";
      return true;
    }
    reports = check_shuffle_properties(game_from_instance(inst), *rule);
  } else {
    log << "\n    cannot replay: unrecognized property '" << prop << "'";
    return true;
  }

  const std::string key = inst.value("key", std::string());
  for (const PropertyReport& r : reports) {
    if (r.property != prop) continue;
    if (!key.empty() && r.instance_key != key && prop.rfind("golden-", 0) == 0) continue;
    return !r.passed();
  }
  log << "\n    cannot replay: property '" << prop << "' not produced by the rerun";
  return true;
}

}  // namespace

ReplayOutcome replay_report(std::istream& in, std::ostream& log) {
  ReplayOutcome outcome;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("report line " + std::to_string(lineno) +
                                  " is not valid JSON: " + e.what());
    }
    if (rec.value("record", std::string()) != "result") continue;
    if (rec.value("verdict", std::string()) != "fail") continue;

    ++outcome.replayed;
    log << "replay line " << lineno << ": " << rec.value("property", std::string("?")) << " ["
        << rec.at("instance").value("key", std::string("?")) << "]";
    const bool still = record_still_fails(rec, log);
    log << (still ? " -> still failing\n" : " -> now passing\n");
    if (still) ++outcome.still_failing;
  }
  return outcome;
}

}  // namespace oncs::verifier
