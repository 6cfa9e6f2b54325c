#pragma once

#include <cstdint>
#include <vector>

#include "oncs/arrival_order.hpp"
#include "oncs/cost_function.hpp"

namespace oncs {

/// Shares indexed by player index (size = ambient size of the universe in
/// play); entries for absent players stay zero.
using ShareVector = std::vector<Rational>;

/// n! for n <= 20 (std::length_error beyond).
std::uint64_t factorial(int n);

/// Every ordering of the given players, in lexicographic order of player
/// indices. Capped at 10 players (std::length_error beyond).
std::vector<ArrivalOrder> all_orders(Coalition players);

/// Exact Shapley values by brute-force enumeration of all |N|! arrival
/// orders: phi_i = (1/|N|!) * sum over orders of MC(i, c, p(i, order)).
/// Deliberately the most literal possible computation — this is the oracle
/// the mechanisms are judged against. Capped at 10 players.
ShareVector shapley_oracle(const CostFunction& c);

}  // namespace oncs
