#include "oncs/arrival_order.hpp"

#include <ostream>
#include <stdexcept>

namespace oncs {

ArrivalOrder::ArrivalOrder(std::vector<PlayerId> sequence) : seq_(std::move(sequence)) {
  for (PlayerId p : seq_) {
    if (players_.contains(p)) {
      throw std::invalid_argument("duplicate player " + default_player_name(p) +
                                  " in arrival order");
    }
    players_ = players_.with(p);  // throws on index >= 16
  }
}

ArrivalOrder ArrivalOrder::of(std::initializer_list<unsigned> indices) {
  std::vector<PlayerId> seq;
  seq.reserve(indices.size());
  for (unsigned i : indices) seq.push_back(PlayerId(i));
  return ArrivalOrder(std::move(seq));
}

std::optional<std::size_t> ArrivalOrder::position_of(PlayerId p) const {
  for (std::size_t i = 0; i < seq_.size(); ++i) {
    if (seq_[i] == p) return i;
  }
  return std::nullopt;
}

ArrivalOrder ArrivalOrder::prefix(std::size_t k) const {
  if (k > seq_.size()) throw std::out_of_range("prefix length beyond arrival order");
  return ArrivalOrder(std::vector<PlayerId>(seq_.begin(), seq_.begin() + k));
}

Coalition ArrivalOrder::up_to(PlayerId i) const {
  Coalition c;
  for (PlayerId p : seq_) {
    c = c.with(p);
    if (p == i) return c;
  }
  throw std::domain_error("player " + default_player_name(i) + " not in arrival order");
}

ArrivalOrder ArrivalOrder::restricted(Coalition s) const {
  if (!s.subset_of(players_)) {
    throw std::domain_error("restriction set is not a subset of the arriving players");
  }
  std::vector<PlayerId> seq;
  seq.reserve(static_cast<std::size_t>(s.size()));
  for (PlayerId p : seq_) {
    if (s.contains(p)) seq.push_back(p);
  }
  return ArrivalOrder(std::move(seq));
}

namespace {

std::string render(std::span<const PlayerId> sequence, std::span<const std::string> names) {
  std::string out = "[";
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (i > 0) out += ", ";
    const PlayerId p = sequence[i];
    out += p.index < names.size() ? names[p.index] : default_player_name(p);
  }
  out += "]";
  return out;
}

}  // namespace

std::string to_string(const ArrivalOrder& order) { return render(order.sequence(), {}); }

std::string to_string(std::span<const PlayerId> sequence) { return render(sequence, {}); }

std::string to_string(std::span<const PlayerId> sequence, std::span<const std::string> names) {
  return render(sequence, names);
}

std::ostream& operator<<(std::ostream& os, const ArrivalOrder& order) {
  return os << to_string(order);
}

}  // namespace oncs
