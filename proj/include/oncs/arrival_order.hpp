#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oncs/coalition.hpp"

namespace oncs {

/// An arrival order: a duplicate-free sequence of players, possibly covering
/// only part of a game's universe. Immutable once built.
class ArrivalOrder {
 public:
  ArrivalOrder() = default;

  /// Throws std::invalid_argument on duplicate players or indices >= 16.
  explicit ArrivalOrder(std::vector<PlayerId> sequence);

  static ArrivalOrder of(std::initializer_list<unsigned> indices);

  std::size_t size() const { return seq_.size(); }
  bool empty() const { return seq_.empty(); }
  PlayerId operator[](std::size_t i) const { return seq_[i]; }
  const std::vector<PlayerId>& sequence() const { return seq_; }
  auto begin() const { return seq_.begin(); }
  auto end() const { return seq_.end(); }

  Coalition players() const { return players_; }
  std::optional<std::size_t> position_of(PlayerId p) const;

  /// First k arrivals.
  ArrivalOrder prefix(std::size_t k) const;

  /// p(i, pi): the players arriving no later than i, including i itself.
  /// Throws std::domain_error if i never arrives.
  Coalition up_to(PlayerId i) const;

  /// The order restricted to s, relative order preserved. s must be a
  /// subset of the arriving players (std::domain_error otherwise).
  ArrivalOrder restricted(Coalition s) const;

  friend bool operator==(const ArrivalOrder&, const ArrivalOrder&) = default;

 private:
  std::vector<PlayerId> seq_;
  Coalition players_;
};

std::string to_string(const ArrivalOrder& order);
std::string to_string(std::span<const PlayerId> sequence);
std::string to_string(std::span<const PlayerId> sequence, std::span<const std::string> names);
std::ostream& operator<<(std::ostream& os, const ArrivalOrder& order);

}  // namespace oncs
