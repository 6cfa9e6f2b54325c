#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "oncs/coalition.hpp"
#include "oncs/rational.hpp"

namespace oncs {

/// One defect found by CostFunction::validate().
struct ValidationIssue {
  enum class Kind {
    EmptySetNonzero,        // c(empty) != 0
    MonotonicityViolation,  // c(a) > c(b) for some a strictly inside b
    AntichainComparable,    // minimal-set list contains a <= b
    AntichainEmptySet,      // minimal-set list contains the empty coalition
  };

  Kind kind;
  Coalition a;
  Coalition b;
  Rational va;
  Rational vb;

  std::string describe(std::span<const std::string> names = {}) const;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string summary(std::span<const std::string> names = {}) const;
};

/// A cost function over subsets of a fixed universe of players.
///
/// Two representations share one interface:
///  * Table   — an explicit value per subset of the universe.
///  * ZeroOne — a 0-1 valued function given by its inclusion-minimal
///              1-coalitions. The list is canonicalized on construction
///              (deduplicated, supersets dropped, sorted), so structural
///              equality of ZeroOne functions is function equality.
///
/// Values are immutable after construction. The universe need not be
/// contiguous: restricting to a sub-coalition keeps the original player
/// indices, which keeps player identity stable through restriction.
class CostFunction {
 public:
  enum class Repr { Table, ZeroOne };

  /// by_mask holds one value per bit pattern, indexed by coalition bits;
  /// it must have size 1 << universe.ambient_size(). Entries at patterns
  /// that are not subsets of the universe are ignored.
  static CostFunction table(Coalition universe, std::vector<Rational> by_mask);

  /// Canonicalizing constructor: minimal_sets may contain duplicates or
  /// supersets, which are dropped. Throws std::domain_error if a set is
  /// empty (that would force c(empty) = 1) or lies outside the universe.
  static CostFunction zero_one(Coalition universe, std::vector<Coalition> minimal_sets);

  /// As zero_one, but keeps the list exactly as given (no minimization, no
  /// empty-set rejection). Exists so validate() has something to report on;
  /// regular construction should go through zero_one().
  static CostFunction zero_one_raw(Coalition universe, std::vector<Coalition> sets);

  static CostFunction constant_zero(Coalition universe);

  Repr repr() const { return repr_; }
  Coalition universe() const { return universe_; }
  int player_count() const { return universe_.size(); }

  /// Minimal 1-coalitions; only valid for the ZeroOne representation
  /// (std::logic_error otherwise).
  const std::vector<Coalition>& minimal_sets() const;

  /// c(s). Throws std::domain_error unless s is a subset of the universe.
  Rational evaluate(Coalition s) const;

  /// True if every value over the universe lies in {0, 1}. O(1) for the
  /// ZeroOne representation, one pass over all subsets for tables.
  bool is_zero_one() const;

  /// Checks normalization (c(empty) = 0) and monotonicity, reporting every
  /// violated pair; for ZeroOne it checks the antichain invariants instead.
  ValidationReport validate() const;

  /// The function restricted to subsets of s (player indices unchanged).
  /// Throws std::domain_error unless s is a subset of the universe.
  CostFunction restricted(Coalition s) const;

  /// Rebuilds this function as an explicit Table over the same universe.
  CostFunction to_table() const;

  /// Structural equality: same universe, same representation, same values
  /// (tables compare only subsets of the universe). For semantic equality
  /// across representations, see semantically_equal().
  friend bool operator==(const CostFunction& a, const CostFunction& b);

 private:
  CostFunction(Repr repr, Coalition universe) : repr_(repr), universe_(universe) {}

  Repr repr_;
  Coalition universe_;
  std::vector<Rational> by_mask_;       // Table
  std::vector<Coalition> minimal_;      // ZeroOne
};

/// MC(i, c, s) = c(s) - c(s without i). Requires i in s and s inside the
/// universe (std::domain_error otherwise).
Rational marginal_cost(const CostFunction& c, PlayerId i, Coalition s);

/// True if both functions have the same universe and agree on every subset.
bool semantically_equal(const CostFunction& a, const CostFunction& b);

}  // namespace oncs
