#include "oncs/cost_function.hpp"

#include <algorithm>
#include <stdexcept>

namespace oncs {

std::string ValidationIssue::describe(std::span<const std::string> names) const {
  switch (kind) {
    case Kind::EmptySetNonzero:
      return "empty coalition has nonzero cost " + va.str();
    case Kind::MonotonicityViolation:
      return "monotonicity violated: c(" + to_string(a, names) + ") = " + va.str() + " > c(" +
             to_string(b, names) + ") = " + vb.str();
    case Kind::AntichainComparable:
      return "minimal-set list is not an antichain: " + to_string(a, names) +
             " is contained in " + to_string(b, names);
    case Kind::AntichainEmptySet:
      return "minimal-set list contains the empty coalition";
  }
  return "unknown issue";
}

std::string ValidationReport::summary(std::span<const std::string> names) const {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.describe(names);
  }
  return out.empty() ? "ok" : out;
}

CostFunction CostFunction::table(Coalition universe, std::vector<Rational> by_mask) {
  const std::size_t want = std::size_t(1) << universe.ambient_size();
  if (by_mask.size() != want) {
    throw std::invalid_argument("table size does not match 2^ambient_size");
  }
  CostFunction c(Repr::Table, universe);
  c.by_mask_ = std::move(by_mask);
  return c;
}

namespace {

void require_inside_universe(Coalition universe, std::span<const Coalition> sets) {
  for (Coalition s : sets) {
    if (!s.subset_of(universe)) {
      throw std::domain_error("minimal set " + to_string(s) + " lies outside the universe " +
                              to_string(universe));
    }
  }
}

}  // namespace

CostFunction CostFunction::zero_one(Coalition universe, std::vector<Coalition> minimal_sets) {
  require_inside_universe(universe, minimal_sets);
  for (Coalition s : minimal_sets) {
    if (s.empty()) throw std::domain_error("empty coalition cannot be a minimal 1-coalition");
  }
  // Canonical form: deduplicated, inclusion-minimal, sorted by bit pattern.
  std::sort(minimal_sets.begin(), minimal_sets.end());
  minimal_sets.erase(std::unique(minimal_sets.begin(), minimal_sets.end()), minimal_sets.end());
  std::vector<Coalition> kept;
  for (Coalition s : minimal_sets) {
    bool dominated = false;
    for (Coalition t : minimal_sets) {
      if (t != s && t.subset_of(s)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(s);
  }
  CostFunction c(Repr::ZeroOne, universe);
  c.minimal_ = std::move(kept);
  return c;
}

CostFunction CostFunction::zero_one_raw(Coalition universe, std::vector<Coalition> sets) {
  require_inside_universe(universe, sets);
  CostFunction c(Repr::ZeroOne, universe);
  c.minimal_ = std::move(sets);
  return c;
}

CostFunction CostFunction::constant_zero(Coalition universe) {
  return zero_one(universe, {});
}

const std::vector<Coalition>& CostFunction::minimal_sets() const {
  if (repr_ != Repr::ZeroOne) throw std::logic_error("minimal_sets on a table-valued function");
  return minimal_;
}

Rational CostFunction::evaluate(Coalition s) const {
  if (!s.subset_of(universe_)) {
    throw std::domain_error("coalition " + to_string(s) + " lies outside the universe " +
                            to_string(universe_));
  }
  if (repr_ == Repr::Table) return by_mask_[s.bits()];
  for (Coalition m : minimal_) {
    if (m.subset_of(s)) return Rational(1);
  }
  return Rational(0);
}

bool CostFunction::is_zero_one() const {
  if (repr_ == Repr::ZeroOne) return true;
  bool ok = true;
  for_each_subset(universe_, [&](Coalition s) {
    const Rational v = by_mask_[s.bits()];
    if (!v.is_zero() && v != Rational(1)) ok = false;
  });
  return ok;
}

ValidationReport CostFunction::validate() const {
  ValidationReport report;
  if (repr_ == Repr::ZeroOne) {
    for (std::size_t i = 0; i < minimal_.size(); ++i) {
      if (minimal_[i].empty()) {
        report.issues.push_back({ValidationIssue::Kind::AntichainEmptySet, minimal_[i],
                                 Coalition(), Rational(1), Rational(0)});
      }
      for (std::size_t j = i + 1; j < minimal_.size(); ++j) {
        if (minimal_[i].subset_of(minimal_[j])) {
          report.issues.push_back({ValidationIssue::Kind::AntichainComparable, minimal_[i],
                                   minimal_[j], Rational(1), Rational(1)});
        } else if (minimal_[j].subset_of(minimal_[i])) {
          report.issues.push_back({ValidationIssue::Kind::AntichainComparable, minimal_[j],
                                   minimal_[i], Rational(1), Rational(1)});
        }
      }
    }
    return report;
  }
  const Rational at_empty = by_mask_[0];
  if (!at_empty.is_zero()) {
    report.issues.push_back(
        {ValidationIssue::Kind::EmptySetNonzero, Coalition(), Coalition(), at_empty, Rational(0)});
  }
  // Every violated pair t strictly inside s with c(t) > c(s).
  for_each_subset(universe_, [&](Coalition s) {
    const Rational vs = by_mask_[s.bits()];
    for_each_subset(s, [&](Coalition t) {
      if (t == s) return;
      const Rational vt = by_mask_[t.bits()];
      if (vt > vs) {
        report.issues.push_back({ValidationIssue::Kind::MonotonicityViolation, t, s, vt, vs});
      }
    });
  });
  return report;
}

CostFunction CostFunction::restricted(Coalition s) const {
  if (!s.subset_of(universe_)) {
    throw std::domain_error("restriction set " + to_string(s) + " lies outside the universe " +
                            to_string(universe_));
  }
  if (repr_ == Repr::ZeroOne) {
    // A minimal 1-coalition survives restriction exactly when it fits
    // inside s; the survivors are still an antichain.
    std::vector<Coalition> kept;
    for (Coalition m : minimal_) {
      if (m.subset_of(s)) kept.push_back(m);
    }
    CostFunction c(Repr::ZeroOne, s);
    c.minimal_ = std::move(kept);
    return c;
  }
  std::vector<Rational> values(std::size_t(1) << s.ambient_size(), Rational(0));
  for_each_subset(s, [&](Coalition t) { values[t.bits()] = by_mask_[t.bits()]; });
  return table(s, std::move(values));
}

CostFunction CostFunction::to_table() const {
  std::vector<Rational> values(std::size_t(1) << universe_.ambient_size(), Rational(0));
  for_each_subset(universe_, [&](Coalition s) { values[s.bits()] = evaluate(s); });
  return table(universe_, std::move(values));
}

bool operator==(const CostFunction& a, const CostFunction& b) {
  if (a.repr_ != b.repr_ || a.universe_ != b.universe_) return false;
  if (a.repr_ == CostFunction::Repr::ZeroOne) return a.minimal_ == b.minimal_;
  bool equal = true;
  for_each_subset(a.universe_, [&](Coalition s) {
    if (a.by_mask_[s.bits()] != b.by_mask_[s.bits()]) equal = false;
  });
  return equal;
}

Rational marginal_cost(const CostFunction& c, PlayerId i, Coalition s) {
  if (!s.contains(i)) {
    throw std::domain_error("player " + default_player_name(i) + " not in coalition " +
                            to_string(s));
  }
  return c.evaluate(s) - c.evaluate(s.without(i));
}

bool semantically_equal(const CostFunction& a, const CostFunction& b) {
  if (a.universe() != b.universe()) return false;
  bool equal = true;
  for_each_subset(a.universe(), [&](Coalition s) {
    if (a.evaluate(s) != b.evaluate(s)) equal = false;
  });
  return equal;
}

}  // namespace oncs
