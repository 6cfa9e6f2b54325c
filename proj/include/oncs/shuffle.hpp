#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oncs/arrival_order.hpp"
#include "oncs/cost_function.hpp"

namespace oncs {

/// A coordinate rule: a per-coalition bijection on orderings that commutes
/// with prefix restriction. Because it must commute with every prefix, it
/// is realized incrementally — the only freedom is where each newcomer is
/// inserted into the current block.
///
/// A rule may inspect the block's current (image-order) contents and the
/// arrival order of the block members, but nothing else; in particular it
/// must not depend on the cost function. Custom rules should be vetted with
/// verifier::check_coordinate_rule before use — insertion-only realization
/// guarantees prefix commutation, but bijectivity is up to the rule.
class CoordinateRule {
 public:
  virtual ~CoordinateRule() = default;

  virtual std::string_view name() const = 0;

  /// Index in [0, block.size()] at which `newcomer` enters the block.
  /// `block` is the block in image order; `block_arrivals` holds the same
  /// players in their arrival order.
  virtual std::size_t insertion_index(std::span<const PlayerId> block,
                                      std::span<const PlayerId> block_arrivals,
                                      PlayerId newcomer) const = 0;

  /// Inverse direction: the arrival order whose insertions produce `block`.
  virtual std::vector<PlayerId> block_arrivals(std::span<const PlayerId> block) const = 0;
};

/// Insert every newcomer at the front of the block: the block reads as the
/// reversal of its members' arrival order. This is the rule that makes the
/// shuffle mechanism reward early arrival most aggressively.
const CoordinateRule& reverse_rule();

/// Insert every newcomer at the end of the block: the block preserves the
/// arrival order unchanged.
const CoordinateRule& arrival_rule();

enum class CdKind { Reverse, Arrival };

const CoordinateRule& rule_for(CdKind kind);
std::string_view cd_name(CdKind kind);
std::optional<CdKind> cd_from_name(std::string_view name);

/// An image ordering together with the bookkeeping the insertion engine
/// maintains:
///  * marginal — the unique player at whose position the running prefix
///    cost jumps 0 -> 1; absent while the arrived set still costs 0.
///  * related — for a marginal player m with c({m}) = 0, the earliest
///    player j in the image with c(p(j) + m) = 1; absent when m leads the
///    image (which happens exactly when c({m}) = 1).
///  * [la_begin, la_end) — the late-arrival block: players that arrived
///    after the marginal player. It sits immediately before the marginal
///    position (la_end is the marginal's index). While no marginal player
///    exists the block spans the whole sequence.
struct ImageOrdering {
  std::vector<PlayerId> sequence;
  std::optional<PlayerId> marginal;
  std::optional<PlayerId> related;
  std::size_t la_begin = 0;
  std::size_t la_end = 0;

  std::optional<std::size_t> position_of(PlayerId p) const;
  std::vector<PlayerId> la_players() const;
};

/// The insertion engine: one arrival at a time, maintaining the image
/// ordering and its marginal / related / late-arrival state. A value type;
/// copy it to branch histories.
class ShuffleState {
 public:
  /// The cost function must be 0-1 valued (std::invalid_argument
  /// otherwise); shuffling is defined against binary costs.
  explicit ShuffleState(CostFunction cost);

  const CostFunction& cost() const { return *cost_; }
  const ArrivalOrder& arrived() const { return arrived_; }
  const ImageOrdering& image() const { return image_; }

  /// The earliest image position whose prefix s satisfies c(s) = 0 and
  /// c(s + i) = 1, i.e. where inserting i would make i the marginal
  /// player; nullopt when no such position exists. Throws std::logic_error
  /// if i already arrived, std::domain_error if i is outside the universe.
  std::optional<std::size_t> try_marginal_insert(PlayerId i) const;

  /// Processes the arrival of i: a marginal insertion at the earliest
  /// possible position if one exists, otherwise an insertion into the
  /// late-arrival block at the position chosen by the coordinate rule.
  /// After every step the stored marginal / related / block state is
  /// recomputed from the definitions and cross-checked (std::logic_error
  /// on any disagreement — that would be an engine bug, not bad input).
  void insert_next(PlayerId i, const CoordinateRule& cd);

 private:
  std::shared_ptr<const CostFunction> cost_;
  ArrivalOrder arrived_;
  ImageOrdering image_;
};

/// Folds insert_next over the whole order and returns the final image.
ImageOrdering shuffle(const ArrivalOrder& order, const CostFunction& c, const CoordinateRule& cd);

struct MarginalInfo {
  PlayerId player;
  std::size_t position;
};

/// The unique position where the running prefix cost jumps 0 -> 1; nullopt
/// when the whole sequence costs 0. Throws std::invalid_argument if a
/// prefix evaluates outside {0, 1}.
std::optional<MarginalInfo> find_marginal(std::span<const PlayerId> sequence,
                                          const CostFunction& c);

struct RelatedLa {
  std::optional<PlayerId> related;
  std::vector<PlayerId> la;  // in image order
};

/// Identifies the related player and the late-arrival block of a sequence
/// that has a marginal player (std::invalid_argument when it has none).
RelatedLa find_related_and_la(std::span<const PlayerId> sequence, const CostFunction& c);

struct InversionResult {
  ArrivalOrder arrival;
  /// Players in the order the reconstruction identified them — latest
  /// arrival first. Equals the arrival order reversed.
  std::vector<PlayerId> identified_latest_first;
};

/// Reconstructs the unique arrival order that shuffles to `image`:
/// repeatedly peel the players that must have arrived last (the marginal
/// player, or its late-arrival block mapped back through the rule), until
/// the remaining players cost 0 and the rule inverts the rest in one step.
InversionResult invert(std::span<const PlayerId> image, const CostFunction& c,
                       const CoordinateRule& cd);

}  // namespace oncs
