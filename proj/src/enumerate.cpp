#include "oncs/enumerate.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace oncs {

std::vector<CostFunction> enumerate_monotone_01(int n) {
  if (n < 0 || n > 5) throw std::length_error("monotone 0-1 enumeration capped at 5 players");
  const Coalition universe = Coalition::full(n);
  const std::uint32_t total = 1u << n;
  std::vector<char> value(total, 0);  // value[mask] of the function under construction
  std::vector<CostFunction> out;

  // Decide values mask by mask in increasing bit-pattern order, so every
  // subset is fixed before its supersets. A value is forced to 1 as soon
  // as any one-smaller subset holds 1; otherwise both branches are open.
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t mask) {
    if (mask == total) {
      std::vector<Coalition> minimal;
      for (std::uint32_t m = 1; m < total; ++m) {
        if (!value[m]) continue;
        bool is_minimal = true;
        for (std::uint32_t bit = m; bit != 0; bit &= bit - 1) {
          if (value[m ^ (bit & (~bit + 1))]) {
            is_minimal = false;
            break;
          }
        }
        if (is_minimal) minimal.push_back(Coalition::from_bits(m));
      }
      out.push_back(CostFunction::zero_one(universe, std::move(minimal)));
      return;
    }
    bool forced = false;
    for (std::uint32_t bit = mask; bit != 0; bit &= bit - 1) {
      if (value[mask ^ (bit & (~bit + 1))]) {
        forced = true;
        break;
      }
    }
    if (!forced) {
      value[mask] = 0;
      walk(mask + 1);
    }
    value[mask] = 1;
    walk(mask + 1);
  };
  walk(1);
  return out;
}

}  // namespace oncs
