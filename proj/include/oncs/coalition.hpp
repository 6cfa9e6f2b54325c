#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oncs {

inline constexpr int kMaxPlayers = 16;

/// Index of a player within a game's universe (0-based, below kMaxPlayers).
struct PlayerId {
  std::uint8_t index = 0;

  constexpr PlayerId() = default;
  constexpr explicit PlayerId(unsigned i) : index(static_cast<std::uint8_t>(i)) {}

  friend constexpr auto operator<=>(PlayerId, PlayerId) = default;
};

/// Fallback display name when no name table is in play: "A" .. "P".
std::string default_player_name(PlayerId id);

/// A set of players, stored as a 16-bit mask. All set algebra is O(1);
/// membership lists come back in ascending index order.
class Coalition {
 public:
  constexpr Coalition() = default;

  static constexpr Coalition full(int player_count) {
    if (player_count < 0 || player_count > kMaxPlayers) {
      throw std::domain_error("player count outside [0, 16]");
    }
    return Coalition(static_cast<std::uint16_t>((1u << player_count) - 1u));
  }

  static constexpr Coalition from_bits(std::uint32_t bits) {
    if (bits > 0xFFFFu) throw std::domain_error("coalition bits beyond 16 players");
    return Coalition(static_cast<std::uint16_t>(bits));
  }

  static Coalition of(std::initializer_list<PlayerId> members) {
    Coalition c;
    for (PlayerId p : members) c = c.with(p);
    return c;
  }

  static Coalition of(std::span<const PlayerId> members) {
    Coalition c;
    for (PlayerId p : members) c = c.with(p);
    return c;
  }

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }

  /// Highest member index + 1; 0 for the empty coalition. Dense arrays
  /// indexed by player use this as their extent.
  int ambient_size() const { return std::bit_width(bits_); }

  constexpr bool contains(PlayerId p) const { return ((bits_ >> p.index) & 1u) != 0; }
  constexpr bool subset_of(Coalition o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr Coalition with(PlayerId p) const {
    if (p.index >= kMaxPlayers) throw std::domain_error("player index beyond 16 players");
    return Coalition(static_cast<std::uint16_t>(bits_ | (1u << p.index)));
  }
  constexpr Coalition without(PlayerId p) const {
    return Coalition(static_cast<std::uint16_t>(bits_ & ~(1u << p.index)));
  }

  friend constexpr Coalition operator|(Coalition a, Coalition b) {
    return Coalition(static_cast<std::uint16_t>(a.bits_ | b.bits_));
  }
  friend constexpr Coalition operator&(Coalition a, Coalition b) {
    return Coalition(static_cast<std::uint16_t>(a.bits_ & b.bits_));
  }

  std::vector<PlayerId> members() const {
    std::vector<PlayerId> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (unsigned i = 0; i < kMaxPlayers; ++i) {
      if ((bits_ >> i) & 1u) out.push_back(PlayerId(i));
    }
    return out;
  }

  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  constexpr explicit Coalition(std::uint16_t bits) : bits_(bits) {}

  std::uint16_t bits_ = 0;
};

/// Calls fn(Coalition) for every subset of u in increasing bit-pattern
/// order (empty set first, u itself last). Because a strict subset always
/// has a smaller bit pattern, every proper subset is visited before its
/// supersets.
template <typename Fn>
void for_each_subset(Coalition u, Fn&& fn) {
  const std::uint32_t full = u.bits();
  std::uint32_t sub = 0;
  while (true) {
    fn(Coalition::from_bits(sub));
    if (sub == full) break;
    sub = (sub - full) & full;
  }
}

/// "{A, C}" using default names, or the supplied name table.
std::string to_string(Coalition c);
std::string to_string(Coalition c, std::span<const std::string> names);

std::ostream& operator<<(std::ostream& os, PlayerId p);
std::ostream& operator<<(std::ostream& os, Coalition c);

}  // namespace oncs
