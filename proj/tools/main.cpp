// Command-line front end: load a game file, run mechanisms with per-arrival
// traces, shuffle or invert orderings, decompose cost functions, compute
// Shapley values, and drive the verification suites.
//
// Exit codes: 0 success; 1 property failure (verify); 2 malformed input
// (files, flags, names, unknown suites); 3 invalid game (validation);
// 70 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oncs/arrival_order.hpp"
#include "oncs/coalition.hpp"
#include "oncs/cost_function.hpp"
#include "oncs/decompose.hpp"
#include "oncs/game_spec.hpp"
#include "oncs/mechanism.hpp"
#include "oncs/rational.hpp"
#include "oncs/shapley.hpp"
#include "oncs/shuffle.hpp"
#include "oncs/verifier.hpp"

namespace game_spec = oncs::game_spec;

namespace {

using nlohmann::json;
using oncs::AllocationTrace;
using oncs::ArrivalOrder;
using oncs::CdKind;
using oncs::Coalition;
using oncs::CostFunction;
using oncs::MechanismConfig;
using oncs::MechanismKind;
using oncs::PlayerId;
using oncs::Rational;
using oncs::ShuffleState;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitParseError = 2;
constexpr int kExitValidationError = 3;
constexpr int kExitInternalError = 70;

/// The game failed validation; the message already lists every issue.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact by default; --decimal switches the *display* to fixed point.
struct ValueView {
  int decimal_places = -1;

  std::string operator()(const Rational& r) const {
    return decimal_places < 0 ? r.str() : r.decimal_str(decimal_places);
  }
};

game_spec::LoadedGame load_game(const std::string& path) {
  game_spec::LoadedGame g = oncs::game_spec::load_file(path);
  const oncs::ValidationReport report = g.cost.validate();
  if (!report.ok()) {
    throw ValidationFailure("invalid game in " + path + ":\n" + report.summary(g.names));
  }
  return g;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    const auto begin = token.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = token.find_last_not_of(" \t");
    out.push_back(token.substr(begin, end - begin + 1));
  }
  return out;
}

std::vector<PlayerId> parse_player_list(const game_spec::LoadedGame& g, const std::string& csv,
                                        const char* what) {
  std::vector<PlayerId> players;
  for (const std::string& name : split_csv(csv)) players.push_back(g.player_named(name));
  if (players.empty()) {
    throw std::invalid_argument(std::string(what) + " must name at least one player");
  }
  return players;
}

ArrivalOrder resolve_arrival(const game_spec::LoadedGame& g, const std::string& flag) {
  if (!flag.empty()) return ArrivalOrder(parse_player_list(g, flag, "--arrival"));
  if (g.arrival) return *g.arrival;
  return ArrivalOrder(g.cost.universe().members());
}

std::string shares_line(const oncs::AllocationVector& step, const std::vector<std::string>& names,
                        const ValueView& fmt) {
  std::string out;
  for (PlayerId p : step.arrived.members()) {
    if (!out.empty()) out += ' ';
    out += names[p.index] + "=" + fmt(p.index < step.shares.size() ? step.shares[p.index] : Rational(0));
  }
  return out.empty() ? std::string("(none)") : out;
}

json names_json(std::span<const PlayerId> seq, const std::vector<std::string>& names) {
  json a = json::array();
  for (PlayerId p : seq) a.push_back(names[p.index]);
  return a;
}

json shares_json(const oncs::AllocationVector& step, const std::vector<std::string>& names) {
  json o = json::object();
  for (PlayerId p : step.arrived.members()) {
    o[names[p.index]] = (p.index < step.shares.size() ? step.shares[p.index] : Rational(0)).str();
  }
  return o;
}

CdKind parse_cd(const std::string& flag) {
  const auto cd = oncs::cd_from_name(flag);
  if (!cd) throw std::invalid_argument("unknown coordinate rule '" + flag + "'");
  return *cd;
}

MechanismKind parse_mechanism(const std::string& flag) {
  if (flag == "sfs") return MechanismKind::SFS;
  if (flag == "gsfs") return MechanismKind::GSFS;
  if (flag == "egsfs") return MechanismKind::EGSFS;
  throw std::invalid_argument("unknown mechanism '" + flag + "'");
}

// ---------------------------------------------------------------------------

int run_allocate(const std::string& file, const std::string& mech_flag, const std::string& cd_flag,
                 bool trace, const std::string& out_path, const std::string& arrival_flag,
                 int decimal) {
  const game_spec::LoadedGame g = load_game(file);
  const ArrivalOrder order = resolve_arrival(g, arrival_flag);
  const CdKind cd = parse_cd(cd_flag);
  const MechanismKind kind = parse_mechanism(mech_flag);
  if (kind == MechanismKind::SFS && cd != CdKind::Reverse) {
    throw std::invalid_argument(
        "sfs is the reverse-rule mechanism; pick --mechanism gsfs to vary --cd");
  }
  if ((kind == MechanismKind::SFS || kind == MechanismKind::GSFS) && !g.cost.is_zero_one()) {
    throw std::invalid_argument(
        "this game is not 0-1 valued; --mechanism egsfs handles general monotone costs");
  }

  const MechanismConfig config{kind, cd};
  const AllocationTrace tr = oncs::allocate_stream(g.cost, order, config);
  const ValueView fmt{decimal};

  std::cout << "game: " << file << " (" << g.cost.player_count() << " players)\n";
  std::cout << "mechanism: " << oncs::mechanism_name(kind) << ", rule: " << oncs::cd_name(cd)
            << "\n";
  std::cout << "arrival: " << oncs::to_string(order.sequence(), g.names) << "\n";
  if (trace) {
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
      std::cout << "  " << (k + 1) << "  " << g.names[order[k].index] << " arrives   cost="
                << fmt(g.cost.evaluate(tr.steps[k].arrived)) << "   "
                << shares_line(tr.steps[k], g.names, fmt) << "\n";
    }
  }
  std::cout << "final: " << shares_line(tr.final(), g.names, fmt) << " (total "
            << fmt(tr.final().total()) << ")\n";

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    const json header{{"record", "header"},
                      {"version", 1},
                      {"format", "oncs-allocation-trace"},
                      {"game", oncs::game_spec::to_json(g.cost, g.names, g.arrival)},
                      {"mechanism", std::string(oncs::mechanism_name(kind))},
                      {"cd", std::string(oncs::cd_name(cd))},
                      {"arrival", names_json(order.sequence(), g.names)}};
    out << header.dump() << '\n';
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
      const json step{{"record", "step"},
                      {"index", k + 1},
                      {"player", g.names[order[k].index]},
                      {"arrived", names_json(tr.steps[k].arrived.members(), g.names)},
                      {"cost", g.cost.evaluate(tr.steps[k].arrived).str()},
                      {"shares", shares_json(tr.steps[k], g.names)}};
      out << step.dump() << '\n';
    }
    const json final_rec{{"record", "final"},
                         {"shares", shares_json(tr.final(), g.names)},
                         {"total", tr.final().total().str()}};
    out << final_rec.dump() << '\n';
    std::cout << "trace written to " << out_path << "\n";
  }
  return kExitOk;
}

int run_shuffle(const std::string& file, const std::string& cd_flag,
                const std::string& arrival_flag) {
  const game_spec::LoadedGame g = load_game(file);
  if (!g.cost.is_zero_one()) {
    throw std::invalid_argument("shuffle is defined for 0-1 valued games; see `decompose`");
  }
  const ArrivalOrder order = resolve_arrival(g, arrival_flag);
  const oncs::CoordinateRule& rule = oncs::rule_for(parse_cd(cd_flag));

  std::cout << "game: " << file << " (" << g.cost.player_count() << " players)\n";
  std::cout << "rule: " << rule.name() << "\n";
  std::cout << "arrival: " << oncs::to_string(order.sequence(), g.names) << "\n";
  ShuffleState st(g.cost);
  for (std::size_t k = 0; k < order.size(); ++k) {
    st.insert_next(order[k], rule);
    const oncs::ImageOrdering& img = st.image();
    std::cout << "  " << (k + 1) << "  " << g.names[order[k].index]
              << " arrives   image=" << oncs::to_string(img.sequence, g.names);
    if (img.marginal) std::cout << "   marginal=" << g.names[img.marginal->index];
    if (img.related) std::cout << " related=" << g.names[img.related->index];
    std::cout << "\n";
  }
  const oncs::ImageOrdering& img = st.image();
  std::cout << "final image: " << oncs::to_string(img.sequence, g.names);
  if (img.marginal) std::cout << "   marginal=" << g.names[img.marginal->index];
  if (img.related) std::cout << " related=" << g.names[img.related->index];
  std::cout << "   la=" << oncs::to_string(img.la_players(), g.names) << "\n";
  return kExitOk;
}

int run_invert(const std::string& file, const std::string& cd_flag, const std::string& image_csv) {
  const game_spec::LoadedGame g = load_game(file);
  if (!g.cost.is_zero_one()) {
    throw std::invalid_argument("invert is defined for 0-1 valued games");
  }
  const std::vector<PlayerId> image = parse_player_list(g, image_csv, "--image");
  const oncs::InversionResult res =
      oncs::invert(image, g.cost, oncs::rule_for(parse_cd(cd_flag)));
  std::cout << "image: " << oncs::to_string(image, g.names) << "\n";
  std::cout << "arrival: " << oncs::to_string(res.arrival.sequence(), g.names) << "\n";
  std::cout << "identified (latest first): "
            << oncs::to_string(res.identified_latest_first, g.names) << "\n";
  return kExitOk;
}

int run_shapley(const std::string& file, int decimal) {
  const game_spec::LoadedGame g = load_game(file);
  const oncs::ShareVector sv = oncs::shapley_oracle(g.cost);
  const ValueView fmt{decimal};
  std::cout << "Shapley values for " << file << "\n";
  for (PlayerId p : g.cost.universe().members()) {
    std::cout << "  " << g.names[p.index] << " = " << fmt(sv[p.index]) << "\n";
  }
  return kExitOk;
}

int run_decompose(const std::string& file, int decimal) {
  const game_spec::LoadedGame g = load_game(file);
  const oncs::Decomposition d = oncs::decompose(g.cost);
  const ValueView fmt{decimal};
  std::cout << "decomposition of " << file << " (" << d.components.size() << " component"
            << (d.components.size() == 1 ? "" : "s") << ")\n";
  Rational threshold;
  for (std::size_t k = 0; k < d.components.size(); ++k) {
    threshold += d.components[k].weight;
    std::cout << "  " << (k + 1) << ": weight " << fmt(d.components[k].weight)
              << "  [cost >= " << fmt(threshold) << "]  minimal:";
    const auto& sets = d.components[k].game.minimal_sets();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      std::cout << (i == 0 ? " " : ", ") << oncs::to_string(sets[i], g.names);
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int run_verify(const std::string& suite, int n, std::uint64_t seed, int threads,
               const std::string& out_path, const std::string& replay_path) {
  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in) throw std::invalid_argument("cannot open report file: " + replay_path);
    const oncs::verifier::ReplayOutcome outcome = oncs::verifier::replay_report(in, std::cout);
    std::cout << "replayed " << outcome.replayed << " failed record"
              << (outcome.replayed == 1 ? "" : "s") << ", " << outcome.still_failing
              << " still failing\n";
    return outcome.still_failing == 0 ? kExitOk : kExitPropertyFailure;
  }
  if (suite.empty()) {
    throw std::invalid_argument("verify needs --suite <name> or --replay <report-file>");
  }

  oncs::verifier::SuiteSpec spec;
  spec.name = suite;
  if (n >= 0) spec.n = n;
  spec.seed = seed;
  spec.threads = threads;
  const oncs::verifier::SuiteResult result = oncs::verifier::run_suite(spec);
  oncs::verifier::print_summary(std::cout, result);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    oncs::verifier::write_report(out, result);
    std::cout << "report written to " << out_path << "\n";
  }
  return result.passed() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online cost sharing: shuffle mechanisms, exact allocation, property verification"};
  app.require_subcommand(1);

  auto* alloc = app.add_subcommand("allocate", "run a mechanism over an arrival order");
  std::string a_file, a_mech = "sfs", a_cd = "reverse", a_out, a_arrival;
  bool a_trace = false;
  int a_decimal = -1;
  alloc->add_option("game", a_file, "game file (JSON)")->required();
  alloc->add_option("--mechanism", a_mech, "sfs | gsfs | egsfs")
      ->check(CLI::IsMember({"sfs", "gsfs", "egsfs"}));
  alloc->add_option("--cd", a_cd, "coordinate rule: reverse | arrival")
      ->check(CLI::IsMember({"reverse", "arrival"}));
  alloc->add_flag("--trace", a_trace, "print each per-arrival allocation vector");
  alloc->add_option("--out", a_out, "write the trace as line-delimited JSON records");
  alloc->add_option("--arrival", a_arrival,
                    "comma-separated arrival order (default: the file's, else player order)");
  alloc->add_option("--decimal", a_decimal, "display values with this many decimal places")
      ->check(CLI::Range(0, 18));

  auto* shuf = app.add_subcommand("shuffle", "print the image ordering after each arrival");
  std::string s_file, s_cd = "reverse", s_arrival;
  shuf->add_option("game", s_file, "game file (JSON)")->required();
  shuf->add_option("--cd", s_cd, "coordinate rule: reverse | arrival")
      ->check(CLI::IsMember({"reverse", "arrival"}));
  shuf->add_option("--arrival", s_arrival,
                   "comma-separated arrival order (default: the file's, else player order)");

  auto* inv = app.add_subcommand("invert", "reconstruct the arrival order behind an image");
  std::string i_file, i_cd = "reverse", i_image;
  inv->add_option("game", i_file, "game file (JSON)")->required();
  inv->add_option("--image", i_image, "comma-separated image ordering")->required();
  inv->add_option("--cd", i_cd, "coordinate rule: reverse | arrival")
      ->check(CLI::IsMember({"reverse", "arrival"}));

  auto* shap = app.add_subcommand("shapley", "print exact Shapley values");
  std::string p_file;
  int p_decimal = -1;
  shap->add_option("game", p_file, "game file (JSON)")->required();
  shap->add_option("--decimal", p_decimal, "display values with this many decimal places")
      ->check(CLI::Range(0, 18));

  auto* dec = app.add_subcommand("decompose", "print weighted 0-1 components");
  std::string d_file;
  int d_decimal = -1;
  dec->add_option("game", d_file, "game file (JSON)")->required();
  dec->add_option("--decimal", d_decimal, "display values with this many decimal places")
      ->check(CLI::Range(0, 18));

  auto* ver = app.add_subcommand("verify", "run a verification suite or replay failed records");
  std::string v_suite, v_out, v_replay;
  int v_n = -1;
  int v_threads = 1;
  std::uint64_t v_seed = oncs::verifier::kDefaultSeed;
  ver->add_option("--suite", v_suite, "suite name (see --list)");
  ver->add_option("--n", v_n, "override the suite's player-count parameter");
  ver->add_option("--seed", v_seed, "seed for the randomized suites");
  ver->add_option("--threads", v_threads, "worker threads (0 = hardware)");
  ver->add_option("--out", v_out, "write the report as line-delimited JSON records");
  ver->add_option("--replay", v_replay, "re-run the failed records of an earlier report");
  bool v_list = false;
  ver->add_flag("--list", v_list, "list suite names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    if (alloc->parsed()) {
      return run_allocate(a_file, a_mech, a_cd, a_trace, a_out, a_arrival, a_decimal);
    }
    if (shuf->parsed()) return run_shuffle(s_file, s_cd, s_arrival);
    if (inv->parsed()) return run_invert(i_file, i_cd, i_image);
    if (shap->parsed()) return run_shapley(p_file, p_decimal);
    if (dec->parsed()) return run_decompose(d_file, d_decimal);
    if (ver->parsed()) {
      if (v_list) {
        for (const std::string& s : oncs::verifier::suite_names()) std::cout << s << "\n";
        return kExitOk;
      }
      return run_verify(v_suite, v_n, v_seed, v_threads, v_out, v_replay);
    }
  } catch (const game_spec::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const ValidationFailure& e) {
    std::cerr << e.what() << "\n";
    return kExitValidationError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitParseError;
}
