#include "oncs/shuffle.hpp"

#include <algorithm>
#include <stdexcept>

namespace oncs {

namespace {

class ReverseRule final : public CoordinateRule {
 public:
  std::string_view name() const override { return "reverse"; }

  std::size_t insertion_index(std::span<const PlayerId>, std::span<const PlayerId>,
                              PlayerId) const override {
    return 0;
  }

  std::vector<PlayerId> block_arrivals(std::span<const PlayerId> block) const override {
    return std::vector<PlayerId>(block.rbegin(), block.rend());
  }
};

class ArrivalRule final : public CoordinateRule {
 public:
  std::string_view name() const override { return "arrival"; }

  std::size_t insertion_index(std::span<const PlayerId> block, std::span<const PlayerId>,
                              PlayerId) const override {
    return block.size();
  }

  std::vector<PlayerId> block_arrivals(std::span<const PlayerId> block) const override {
    return std::vector<PlayerId>(block.begin(), block.end());
  }
};

}  // namespace

const CoordinateRule& reverse_rule() {
  static const ReverseRule rule;
  return rule;
}

const CoordinateRule& arrival_rule() {
  static const ArrivalRule rule;
  return rule;
}

const CoordinateRule& rule_for(CdKind kind) {
  return kind == CdKind::Reverse ? reverse_rule() : arrival_rule();
}

std::string_view cd_name(CdKind kind) { return rule_for(kind).name(); }

std::optional<CdKind> cd_from_name(std::string_view name) {
  if (name == "reverse") return CdKind::Reverse;
  if (name == "arrival") return CdKind::Arrival;
  return std::nullopt;
}

std::optional<std::size_t> ImageOrdering::position_of(PlayerId p) const {
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] == p) return i;
  }
  return std::nullopt;
}

std::vector<PlayerId> ImageOrdering::la_players() const {
  return std::vector<PlayerId>(sequence.begin() + la_begin, sequence.begin() + la_end);
}

ShuffleState::ShuffleState(CostFunction cost)
    : cost_(std::make_shared<const CostFunction>(std::move(cost))) {
  if (!cost_->is_zero_one()) {
    throw std::invalid_argument("shuffle rules are defined for 0-1 valued cost functions");
  }
}

std::optional<std::size_t> ShuffleState::try_marginal_insert(PlayerId i) const {
  if (arrived_.position_of(i)) {
    throw std::logic_error("player " + default_player_name(i) + " already arrived");
  }
  if (!cost_->universe().contains(i)) {
    throw std::domain_error("player " + default_player_name(i) + " outside the universe");
  }
  const auto& seq = image_.sequence;
  Coalition prefix;
  for (std::size_t k = 0; k <= seq.size(); ++k) {
    if (!cost_->evaluate(prefix).is_zero()) break;  // later prefixes only cost more
    if (cost_->evaluate(prefix.with(i)) == Rational(1)) return k;
    if (k < seq.size()) prefix = prefix.with(seq[k]);
  }
  return std::nullopt;
}

void ShuffleState::insert_next(PlayerId i, const CoordinateRule& cd) {
  const auto marginal_pos = try_marginal_insert(i);  // also validates i
  auto& seq = image_.sequence;

  if (marginal_pos) {
    // The newcomer becomes the marginal player at the earliest prefix that
    // flips the cost; the late-arrival block restarts empty at her side.
    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(*marginal_pos), i);
    image_.marginal = i;
    image_.related =
        *marginal_pos == 0 ? std::nullopt : std::optional<PlayerId>(seq[*marginal_pos - 1]);
    image_.la_begin = image_.la_end = *marginal_pos;
  } else {
    // Rule-driven insertion into the block of players arriving after the
    // marginal player (the whole sequence while no marginal player exists).
    const std::span<const PlayerId> block(seq.data() + image_.la_begin,
                                          image_.la_end - image_.la_begin);
    const ArrivalOrder block_arrivals = arrived_.restricted(Coalition::of(block));
    const std::size_t at = cd.insertion_index(block, block_arrivals.sequence(), i);
    if (at > block.size()) {
      throw std::logic_error(std::string("coordinate rule ") + std::string(cd.name()) +
                             " returned an out-of-range insertion index");
    }
    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(image_.la_begin + at), i);
    image_.la_end += 1;
    if (!image_.marginal) image_.la_end = seq.size();  // block spans everything
  }

  arrived_ = ArrivalOrder([&] {
    auto s = arrived_.sequence();
    s.push_back(i);
    return s;
  }());

  // Cross-check the incrementally maintained state against the standalone
  // definitions; a mismatch is an engine defect and must not pass silently.
  const auto found = find_marginal(seq, *cost_);
  if (found.has_value() != image_.marginal.has_value() ||
      (found && found->player != *image_.marginal)) {
    throw std::logic_error("engine state mismatch: marginal player");
  }
  if (found) {
    if (image_.la_end != found->position) {
      throw std::logic_error("engine state mismatch: block must end at the marginal position");
    }
    const RelatedLa rl = find_related_and_la(seq, *cost_);
    if (rl.related != image_.related) {
      throw std::logic_error("engine state mismatch: related player");
    }
    if (rl.la != image_.la_players()) {
      throw std::logic_error("engine state mismatch: late-arrival block");
    }
  } else if (image_.la_begin != 0 || image_.la_end != seq.size()) {
    throw std::logic_error("engine state mismatch: block must span the whole sequence");
  }
}

ImageOrdering shuffle(const ArrivalOrder& order, const CostFunction& c,
                      const CoordinateRule& cd) {
  ShuffleState state(c);
  for (PlayerId p : order) state.insert_next(p, cd);
  return state.image();
}

std::optional<MarginalInfo> find_marginal(std::span<const PlayerId> sequence,
                                          const CostFunction& c) {
  Coalition prefix;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    prefix = prefix.with(sequence[i]);
    const Rational v = c.evaluate(prefix);
    if (v == Rational(1)) return MarginalInfo{sequence[i], i};
    if (!v.is_zero()) {
      throw std::invalid_argument("marginal search requires 0-1 valued costs, got " + v.str());
    }
  }
  return std::nullopt;
}

RelatedLa find_related_and_la(std::span<const PlayerId> sequence, const CostFunction& c) {
  const auto m = find_marginal(sequence, c);
  if (!m) throw std::invalid_argument("sequence has no marginal player");
  if (c.evaluate(Coalition().with(m->player)) == Rational(1)) {
    // The marginal player is self-sufficient: everybody placed before her
    // arrived after her, and no related player exists.
    return RelatedLa{std::nullopt,
                     std::vector<PlayerId>(sequence.begin(), sequence.begin() + m->position)};
  }
  Coalition up_to_j;
  for (std::size_t j = 0; j < m->position; ++j) {
    up_to_j = up_to_j.with(sequence[j]);
    if (c.evaluate(up_to_j.with(m->player)) == Rational(1)) {
      return RelatedLa{sequence[j],
                       std::vector<PlayerId>(sequence.begin() + j + 1,
                                             sequence.begin() + m->position)};
    }
  }
  throw std::logic_error("marginal player with c({m}) = 0 must have a related player");
}

InversionResult invert(std::span<const PlayerId> image, const CostFunction& c,
                       const CoordinateRule& cd) {
  // Validates distinctness and universe membership as a side effect.
  ArrivalOrder as_order{std::vector<PlayerId>(image.begin(), image.end())};
  if (!as_order.players().subset_of(c.universe())) {
    throw std::domain_error("image contains players outside the universe");
  }

  std::vector<PlayerId> current(image.begin(), image.end());
  std::vector<PlayerId> identified;  // latest arrival first
  identified.reserve(current.size());

  while (true) {
    if (c.evaluate(Coalition::of(current)).is_zero()) {
      // Nobody remaining was ever marginal: the remaining image is exactly
      // the rule applied to the remaining arrivals, so one inverse call
      // recovers them all.
      const std::vector<PlayerId> arrivals = cd.block_arrivals(current);
      identified.insert(identified.end(), arrivals.rbegin(), arrivals.rend());
      break;
    }
    const auto m = find_marginal(current, c);
    const RelatedLa rl = find_related_and_la(current, c);
    if (rl.la.empty()) {
      // No one arrived after the marginal player: she is the latest.
      identified.push_back(m->player);
      current.erase(current.begin() + static_cast<std::ptrdiff_t>(m->position));
    } else {
      // The whole block arrived after everyone else; the rule's inverse
      // gives the block members' own arrival order.
      const std::vector<PlayerId> arrivals = cd.block_arrivals(rl.la);
      identified.insert(identified.end(), arrivals.rbegin(), arrivals.rend());
      Coalition la_set = Coalition::of(rl.la);
      std::erase_if(current, [&](PlayerId p) { return la_set.contains(p); });
    }
  }

  std::vector<PlayerId> arrival(identified.rbegin(), identified.rend());
  return InversionResult{ArrivalOrder(std::move(arrival)), std::move(identified)};
}

}  // namespace oncs
