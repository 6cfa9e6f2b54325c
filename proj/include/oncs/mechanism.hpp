#pragma once

#include <string_view>
#include <vector>

#include "oncs/arrival_order.hpp"
#include "oncs/cost_function.hpp"
#include "oncs/shapley.hpp"
#include "oncs/shuffle.hpp"

namespace oncs {

/// The shares charged right after one arrival event: who has arrived so
/// far, and what each of them currently owes. Absent players hold zero.
struct AllocationVector {
  Coalition arrived;
  ShareVector shares;

  Rational total() const;
};

/// One AllocationVector per arrival, in arrival order.
struct AllocationTrace {
  std::vector<AllocationVector> steps;

  const AllocationVector& final() const;
};

/// Online allocation for 0-1 valued games: after each arrival the arrived
/// prefix is shuffled and each player is charged her marginal cost at her
/// position in the image — concretely, the image's marginal player owes 1
/// and everyone else owes 0 (all zero while the arrived set still costs 0).
/// The image evolves incrementally; with cross_check set, every step is
/// additionally compared against a from-scratch shuffle of the prefix.
/// Throws std::invalid_argument if c is not 0-1 valued.
AllocationTrace allocate_01_stream(const CostFunction& c, const ArrivalOrder& order,
                                   const CoordinateRule& cd, bool cross_check = false);

/// Online allocation for arbitrary valid monotone games: at every prefix S
/// the restricted game is decomposed into weighted 0-1 components, each
/// component is shuffled from scratch over the same prefix order, and each
/// component's marginal player is charged that component's weight. The
/// decomposition is recomputed at every prefix, exactly as specified —
/// no incremental shortcut. Throws std::invalid_argument when c fails
/// validation.
AllocationTrace allocate_general_stream(const CostFunction& c, const ArrivalOrder& order,
                                        const CoordinateRule& cd);

enum class MechanismKind { SFS, GSFS, EGSFS };

/// Which mechanism runs, and under which coordinate rule. SFS is the
/// original front-insertion mechanism: it *is* GSFS under the reverse
/// rule, and the factory pins that down.
struct MechanismConfig {
  MechanismKind kind;
  CdKind cd;

  static MechanismConfig sfs() { return {MechanismKind::SFS, CdKind::Reverse}; }
  static MechanismConfig gsfs(CdKind cd) { return {MechanismKind::GSFS, cd}; }
  static MechanismConfig egsfs(CdKind cd) { return {MechanismKind::EGSFS, cd}; }
};

std::string_view mechanism_name(MechanismKind kind);

/// Dispatches on the config: SFS / GSFS require a 0-1 valued game
/// (std::invalid_argument otherwise); EGSFS accepts any valid game.
AllocationTrace allocate_stream(const CostFunction& c, const ArrivalOrder& order,
                                const MechanismConfig& config, bool cross_check = false);

}  // namespace oncs
