#include "oncs/decompose.hpp"

#include <algorithm>
#include <stdexcept>

namespace oncs {

Decomposition decompose(const CostFunction& c) {
  const ValidationReport validation = c.validate();
  if (!validation.ok()) {
    throw std::invalid_argument("cannot decompose an invalid cost function: " +
                                validation.summary());
  }

  const Coalition universe = c.universe();
  std::vector<Rational> thresholds;
  for_each_subset(universe, [&](Coalition s) {
    const Rational v = c.evaluate(s);
    if (!v.is_zero()) thresholds.push_back(v);
  });
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  Decomposition d;
  Rational previous(0);
  for (const Rational& v : thresholds) {
    // {s : c(s) >= v} is upward closed, so a member is minimal exactly when
    // no one-smaller subset qualifies.
    std::vector<Coalition> minimal;
    for_each_subset(universe, [&](Coalition s) {
      if (s.empty() || c.evaluate(s) < v) return;
      for (PlayerId p : s.members()) {
        if (c.evaluate(s.without(p)) >= v) return;
      }
      minimal.push_back(s);
    });
    d.components.push_back({CostFunction::zero_one(universe, std::move(minimal)), v - previous});
    previous = v;
  }
  return d;
}

std::string DecompositionIssue::describe(std::span<const std::string> names) const {
  switch (kind) {
    case Kind::SumMismatch:
      return "weighted sum on " + to_string(subset, names) + " is " + actual.str() +
             ", expected " + expected.str();
    case Kind::NonpositiveWeight:
      return "component " + std::to_string(component) + " has nonpositive weight " +
             actual.str();
    case Kind::ComponentInvalid:
      return "component " + std::to_string(component) + " is not a valid monotone 0-1 function";
    case Kind::UniverseMismatch:
      return "component " + std::to_string(component) + " has a different universe";
  }
  return "unknown issue";
}

std::string DecompositionReport::summary(std::span<const std::string> names) const {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.describe(names);
  }
  return out.empty() ? "ok" : out;
}

DecompositionReport verify_decomposition(const CostFunction& c, const Decomposition& d) {
  DecompositionReport report;
  for (std::size_t k = 0; k < d.components.size(); ++k) {
    const WeightedComponent& wc = d.components[k];
    if (wc.game.universe() != c.universe()) {
      report.issues.push_back(
          {DecompositionIssue::Kind::UniverseMismatch, k, Coalition(), Rational(0), Rational(0)});
    }
    if (wc.weight <= Rational(0)) {
      report.issues.push_back(
          {DecompositionIssue::Kind::NonpositiveWeight, k, Coalition(), Rational(0), wc.weight});
    }
    if (!wc.game.is_zero_one() || !wc.game.validate().ok()) {
      report.issues.push_back(
          {DecompositionIssue::Kind::ComponentInvalid, k, Coalition(), Rational(0), Rational(0)});
    }
  }
  // Universe mismatches make the sum ill-defined; report them and stop.
  for (const auto& issue : report.issues) {
    if (issue.kind == DecompositionIssue::Kind::UniverseMismatch) return report;
  }
  for_each_subset(c.universe(), [&](Coalition s) {
    Rational sum(0);
    for (const WeightedComponent& wc : d.components) sum += wc.weight * wc.game.evaluate(s);
    const Rational expected = c.evaluate(s);
    if (sum != expected) {
      report.issues.push_back({DecompositionIssue::Kind::SumMismatch, 0, s, expected, sum});
    }
  });
  return report;
}

}  // namespace oncs
