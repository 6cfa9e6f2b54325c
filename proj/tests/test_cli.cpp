// End-to-end checks of the command-line tool: spawns the real binary,
// captures stdout+stderr, and checks exit codes and output. Invoked as
//   oncs_cli_tests <path-to-cli> <path-to-games-dir>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oncs/game_spec.hpp"
#include "oncs/mechanism.hpp"

using nlohmann::json;

namespace {

int g_failures = 0;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string g_cli;
std::string g_games;

RunResult run(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::cerr << "popen failed for: " << cmd << "\n";
    std::exit(2);
  }
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void expect(bool ok, const std::string& what, const RunResult& r) {
  if (ok) return;
  ++g_failures;
  std::cerr << "FAIL: " << what << "\n  exit=" << r.exit_code << "\n  output:\n" << r.output
            << "\n";
}

void check_exit(const std::string& args, int want) {
  const RunResult r = run(args);
  expect(r.exit_code == want,
         "`" + args + "` should exit " + std::to_string(want) + ", got " +
             std::to_string(r.exit_code),
         r);
}

void check_contains(const std::string& args, int want_exit,
                    const std::vector<std::string>& needles) {
  const RunResult r = run(args);
  expect(r.exit_code == want_exit,
         "`" + args + "` should exit " + std::to_string(want_exit) + ", got " +
             std::to_string(r.exit_code),
         r);
  for (const std::string& needle : needles) {
    expect(r.output.find(needle) != std::string::npos,
           "`" + args + "` output should contain \"" + needle + "\"", r);
  }
}

std::string game(const std::string& name) { return g_games + "/" + name; }

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir && *dir ? dir : "/tmp") + "/" + name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

// The written trace must reproduce the in-process trace values exactly.
void check_trace_roundtrip() {
  const std::string trace_path = temp_path("oncs_cli_trace.jsonl");
  const RunResult r =
      run("allocate " + game("g5.json") + " --mechanism egsfs --out " + trace_path);
  expect(r.exit_code == 0, "allocate --out should succeed", r);

  std::ifstream in(trace_path);
  expect(bool(in), "trace file should exist", r);
  std::string line;
  std::getline(in, line);
  const json header = json::parse(line);
  expect(header.at("record") == "header", "first record is the header", r);

  // Re-run the allocation from the game embedded in the header.
  const oncs::game_spec::LoadedGame g = oncs::game_spec::parse(header.at("game"));
  const oncs::ArrivalOrder order = *g.arrival;
  const oncs::AllocationTrace tr = oncs::allocate_stream(
      g.cost, order, oncs::MechanismConfig::egsfs(oncs::CdKind::Reverse));

  std::size_t steps_seen = 0;
  bool final_seen = false;
  while (std::getline(in, line)) {
    const json rec = json::parse(line);
    if (rec.at("record") == "step") {
      const std::size_t k = rec.at("index").get<std::size_t>() - 1;
      expect(k < tr.steps.size(), "step index in range", r);
      for (const auto& [name, value] : rec.at("shares").items()) {
        const oncs::PlayerId p = g.player_named(name);
        expect(value.get<std::string>() == tr.steps[k].shares[p.index].str(),
               "step " + std::to_string(k + 1) + " share of " + name + " reproduces", r);
      }
      ++steps_seen;
    } else if (rec.at("record") == "final") {
      expect(rec.at("total").get<std::string>() == tr.final().total().str(),
             "final total reproduces", r);
      final_seen = true;
    }
  }
  expect(steps_seen == tr.steps.size(), "every step was recorded", r);
  expect(final_seen, "final record present", r);
  std::remove(trace_path.c_str());
}

void check_verify_report_and_replay() {
  const std::string report_path = temp_path("oncs_cli_report.jsonl");
  check_exit("verify --suite exhaustive-n2 --out " + report_path, 0);

  // A passing report has nothing to replay.
  check_contains("verify --replay " + report_path, 0, {"replayed 0 failed records"});

  // A fabricated failing record for a healthy rule comes back passing...
  const std::string fake_pass = temp_path("oncs_cli_fake_pass.jsonl");
  write_file(fake_pass,
             R"({"record":"result","suite":"x","property":"cd-bijectivity",)"
             R"("instance":{"key":"reverse","cd":"reverse","n":3},)"
             R"("verdict":"fail","checked":1,"failures":1})"
             "\n");
  check_contains("verify --replay " + fake_pass, 0, {"now passing"});

  // ...while one for the deliberately broken demo rule keeps failing.
  const std::string fake_fail = temp_path("oncs_cli_fake_fail.jsonl");
  write_file(fake_fail,
             R"({"record":"result","suite":"x","property":"cd-bijectivity",)"
             R"("instance":{"key":"parity-demo","cd":"parity-demo","n":3},)"
             R"("verdict":"fail","checked":1,"failures":1})"
             "\n");
  check_contains("verify --replay " + fake_fail, 1, {"still failing"});

  std::remove(report_path.c_str());
  std::remove(fake_pass.c_str());
  std::remove(fake_fail.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " <cli> <games-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_games = argv[2];

  check_exit("--help", 0);
  check_exit("", 2);           // a subcommand is required
  check_exit("bogus", 2);      // unknown subcommand
  check_exit("allocate", 2);   // missing game file
  check_exit("allocate /nonexistent/game.json", 2);

  // Malformed and invalid game files.
  const std::string malformed = temp_path("oncs_cli_malformed.json");
  write_file(malformed, "{ not json");
  check_exit("allocate " + malformed, 2);
  const std::string invalid = temp_path("oncs_cli_invalid.json");
  write_file(invalid, R"({"players":["A","B"],"cost":{"kind":"table","entries":[)"
                      R"({"coalition":["A"],"cost":5},)"
                      R"({"coalition":["A","B"],"cost":1}]}})");
  check_contains("allocate " + invalid, 3, {"invalid game"});
  std::remove(malformed.c_str());
  std::remove(invalid.c_str());

  // Worked examples: payments follow the image orderings.
  check_contains("allocate " + game("g1.json") + " --trace", 0,
                 {"A=0 B=0 C=1", "total 1"});
  check_contains("allocate " + game("g3.json"), 0, {"E=1"});
  check_contains("allocate " + game("g5.json") + " --mechanism egsfs --trace", 0,
                 {"A=1", "A=0 B=3"});
  check_contains("allocate " + game("g5.json") + " --mechanism egsfs --arrival B,A", 0,
                 {"A=2 B=1"});
  check_contains("allocate " + game("g1.json") + " --decimal 2", 0, {"C=1.00"});

  // Mechanism preconditions.
  check_exit("allocate " + game("g5.json"), 2);  // staircase is not 0-1
  check_exit("allocate " + game("g1.json") + " --mechanism sfs --cd arrival", 2);
  check_exit("allocate " + game("g1.json") + " --cd sideways", 2);
  check_exit("allocate " + game("g1.json") + " --arrival A,Z", 2);

  // Shuffle, invert, shapley, decompose.
  check_contains("shuffle " + game("g3.json"), 0,
                 {"[B, D, G, F, E, C, A]", "marginal=E", "related=D", "la=[G, F]"});
  check_contains("shuffle " + game("g2.json"), 0, {"[A, C, B]"});
  check_contains("shuffle " + game("g4.json") + " --cd arrival", 0,
                 {"[B, C, A]", "[B, E, D, C, A]", "marginal=D"});
  check_exit("shuffle " + game("g5.json"), 2);  // not 0-1

  check_contains("invert " + game("g3.json") + " --image B,D,G,F,E,C,A", 0,
                 {"arrival: [A, B, C, D, E, F, G]",
                  "identified (latest first): [G, F, E, D, C, B, A]"});
  check_exit("invert " + game("g3.json") + " --image B,B", 2);
  check_exit("invert " + game("g3.json"), 2);  // --image is required

  check_contains("shapley " + game("g1.json"), 0, {"A = 2/3", "B = 1/6", "C = 1/6"});
  check_contains("shapley " + game("g5.json") + " --decimal 3", 0,
                 {"A = 1.000", "B = 2.000"});

  check_contains("decompose " + game("g5.json"), 0,
                 {"3 components", "weight 1", "{A, B}"});

  // Verification plumbing.
  check_exit("verify --suite exhaustive-n2", 0);
  check_contains("verify --suite golden", 0, {"PASS"});
  check_exit("verify --suite nope", 2);
  check_exit("verify", 2);  // needs --suite or --replay
  check_contains("verify --list", 0, {"golden", "exhaustive-n4", "random-egsfs"});

  check_trace_roundtrip();
  check_verify_report_and_replay();

  if (g_failures == 0) {
    std::cout << "cli: all checks passed\n";
    return 0;
  }
  std::cerr << "cli: " << g_failures << " check(s) failed\n";
  return 1;
}
