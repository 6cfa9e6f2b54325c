#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "oncs/cost_function.hpp"
#include "oncs/mechanism.hpp"
#include "oncs/shuffle.hpp"

namespace oncs::verifier {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// A game plus the stable key identifying it inside a suite run.
struct SourcedGame {
  std::string key;
  CostFunction game;
};

/// A counterexample, complete enough to re-run standalone: the payload
/// always embeds the game in the game-file JSON schema plus the orders and
/// values involved.
struct Witness {
  std::string description;
  nlohmann::json payload;
};

/// Outcome of checking one property against one game (or one rule).
struct PropertyReport {
  std::string property;
  std::string instance_key;
  nlohmann::json instance;  // game / cd / mechanism context, replayable
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::optional<Witness> witness;  // first failure only

  bool passed() const { return failures == 0; }
};

/// All monotone normalized 0-1 games on n players (n <= 4 here; the
/// enumeration itself handles 5, but exhaustive property sweeps stop at 4).
std::vector<SourcedGame> exhaustive_games(int n);

struct RandomGamesSpec {
  int max_players = 5;       // per-game size drawn uniformly from 1..max_players
  int count = 200;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t max_value = 8;  // integer costs drawn uniformly from 0..max_value
};

/// Seeded random monotone integer-valued table games: draw a value per
/// subset, push the running maximum over subsets through, zero the empty
/// set. Identical specs produce identical games on every platform.
std::vector<SourcedGame> random_monotone_games(const RandomGamesSpec& spec);

/// Structural properties of the shuffle itself, exhaustively over every
/// subset of the universe and every order of that subset (universe capped
/// at 7 players): bijectivity, prefix commutation, inversion round trip,
/// group-size monotonicity, flip monotonicity, the two structural facts the
/// correctness argument leans on (late arrivals land before the marginal
/// player; related-player prefixes shrink under adjacent flips), and — for
/// the reverse rule — agreement with a literal insert-before-your-
/// predecessor reference implementation.
std::vector<PropertyReport> check_shuffle_properties(const SourcedGame& sg,
                                                     const CoordinateRule& cd);

/// Allocation properties over every full-universe order (universe capped at
/// 7 players): exact budget balance and non-negativity at every prefix,
/// per-player monotone non-increasing shares (OIR), exact agreement of the
/// order-sum with |N|! times the Shapley value (SF), and no gain from early
/// arrival in both the adjacent-swap and the general-delay form, plus an
/// agreement check between those two forms.
std::vector<PropertyReport> check_mechanism_properties(const SourcedGame& sg,
                                                       const MechanismConfig& config);

/// On 0-1 valued games the decomposition route must collapse to the direct
/// 0-1 allocation (the only component is the game itself, weight 1); checks
/// every full-universe order step by step.
PropertyReport check_general_01_agreement(const SourcedGame& sg, CdKind cd);

/// Decomposition properties: the level-set decomposition reconstructs the
/// game exactly (positive weights, valid 0-1 components), and restricting
/// any sub-universe's decomposition to a smaller sub-universe and merging
/// equal components reproduces the smaller sub-universe's decomposition.
std::vector<PropertyReport> check_decomposition_properties(const SourcedGame& sg);

/// Standalone vetting for coordinate rules over all subsets of an
/// n-player universe: the realized map is bijective per subset, commutes
/// with prefix restriction, and block_arrivals inverts it. Run this before
/// trusting any custom rule.
std::vector<PropertyReport> check_coordinate_rule(const CoordinateRule& cd, int n);

/// A deliberately broken rule (inserts even-indexed newcomers at the front,
/// odd-indexed at the back — not injective). Exists so the harness can
/// demonstrate, end to end, what a failing rule looks like.
const CoordinateRule& parity_demo_rule();

/// reverse | arrival | parity-demo; nullptr when unknown.
const CoordinateRule* rule_by_name(std::string_view name);

/// The worked-example games the golden suite replays.
namespace fixtures {
CostFunction or_single_pair();  // minimal sets {A}, {B,C} on three players
CostFunction single_pair();     // minimal set {A,B} on three players
CostFunction seven_player();    // minimal sets {A,C},{B,C},{B,D,E},{E,F} on seven
CostFunction five_player();     // minimal sets {A},{B,D},{C,E} on five
CostFunction staircase();       // table 0 / 1 / 2 / 3 on two players
}  // namespace fixtures

struct SuiteSpec {
  std::string name;
  std::optional<int> n;  // exhaustive depth override where it applies
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;  // 0 = hardware concurrency; results are order-independent
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = kDefaultSeed;
  std::vector<PropertyReport> reports;
  double wall_seconds = 0;

  std::uint64_t checked() const;
  std::uint64_t failures() const;
  bool passed() const;
};

std::vector<std::string> suite_names();

/// Runs a named suite. Unknown names throw std::invalid_argument. Given the
/// same spec (seed included, thread count excluded), the reports are
/// identical run to run.
SuiteResult run_suite(const SuiteSpec& spec);

/// Human-readable per-property summary plus verdict and wall time.
void print_summary(std::ostream& os, const SuiteResult& result);

/// Line-delimited JSON records: one header, one result per property report
/// (witness payload inline on failures), one trailing summary. Contains no
/// timings, so equal runs serialize byte-for-byte equal.
void write_report(std::ostream& os, const SuiteResult& result);

struct ReplayOutcome {
  int replayed = 0;
  int still_failing = 0;
};

/// Re-runs every failed result record from a report stream (the witness
/// instance carries everything needed) and logs fresh verdicts.
ReplayOutcome replay_report(std::istream& in, std::ostream& log);

}  // namespace oncs::verifier
