#include "oncs/shapley.hpp"

#include <algorithm>
#include <stdexcept>

namespace oncs {

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::length_error("factorial argument outside [0, 20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= std::uint64_t(i);
  return f;
}

std::vector<ArrivalOrder> all_orders(Coalition players) {
  if (players.size() > 10) throw std::length_error("order enumeration capped at 10 players");
  std::vector<PlayerId> perm = players.members();
  std::vector<ArrivalOrder> out;
  out.reserve(factorial(players.size()));
  std::sort(perm.begin(), perm.end());
  do {
    out.push_back(ArrivalOrder(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

ShareVector shapley_oracle(const CostFunction& c) {
  const Coalition universe = c.universe();
  const int n = universe.size();
  if (n > 10) throw std::length_error("shapley oracle capped at 10 players");
  ShareVector sums(std::size_t(universe.ambient_size()), Rational(0));
  if (n == 0) return sums;
  std::vector<PlayerId> perm = universe.members();
  std::sort(perm.begin(), perm.end());
  do {
    Coalition prefix;
    for (PlayerId p : perm) {
      prefix = prefix.with(p);
      sums[p.index] += marginal_cost(c, p, prefix);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const Rational orders(static_cast<std::int64_t>(factorial(n)));
  for (Rational& s : sums) s /= orders;
  return sums;
}

}  // namespace oncs
