#pragma once

#include <vector>

#include "oncs/cost_function.hpp"

namespace oncs {

/// Every monotone, normalized 0-1 cost function on n players, each exactly
/// once, in a fixed deterministic order. Equivalently: every antichain of
/// nonempty subsets of {0..n-1}. Sizes grow Dedekind-fast, so n is capped
/// at 5 (std::length_error beyond): 2, 5, 19, 167, 7580 functions for
/// n = 1..5.
std::vector<CostFunction> enumerate_monotone_01(int n);

}  // namespace oncs
