#pragma once

#include <string>
#include <vector>

#include "oncs/cost_function.hpp"

namespace oncs {

/// One 0-1 component with its positive weight.
struct WeightedComponent {
  CostFunction game;  // always canonical ZeroOne over the input's universe
  Rational weight;
};

/// c = sum of weight_k * game_k over all subsets of the universe.
struct Decomposition {
  std::vector<WeightedComponent> components;
};

/// Level-set decomposition of a valid monotone normalized cost function:
/// for the distinct nonzero values v_1 < ... < v_m taken by c, component k
/// is the indicator [c >= v_k] (as its antichain of minimal coalitions)
/// with weight v_k - v_{k-1} (v_0 = 0). A 0-1 function decomposes into
/// itself with weight 1; the constant zero function into nothing.
/// Throws std::invalid_argument when validate() finds issues.
Decomposition decompose(const CostFunction& c);

struct DecompositionIssue {
  enum class Kind {
    SumMismatch,        // weighted component sum != c on some subset
    NonpositiveWeight,  // component weight <= 0
    ComponentInvalid,   // component not a valid monotone 0-1 function
    UniverseMismatch,   // component universe differs from c's
  };

  Kind kind;
  std::size_t component = 0;  // for the component-scoped kinds
  Coalition subset;           // for SumMismatch
  Rational expected;
  Rational actual;

  std::string describe(std::span<const std::string> names = {}) const;
};

struct DecompositionReport {
  std::vector<DecompositionIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string summary(std::span<const std::string> names = {}) const;
};

/// Checks a claimed decomposition of c: exact weighted-sum agreement on
/// every subset, positive weights, and valid 0-1 components over the same
/// universe. Report-only; never throws on bad decompositions.
DecompositionReport verify_decomposition(const CostFunction& c, const Decomposition& d);

}  // namespace oncs
