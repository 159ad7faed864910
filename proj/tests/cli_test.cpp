#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const char* kCli = BNPIN_CLI_PATH;
const char* kFixtureDir = BNPIN_FIXTURE_DIR;

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("bnpin_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spill_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const fs::path so = scratch() / "stdout.txt";
  const fs::path se = scratch() / "stderr.txt";
  std::string cmd = std::string(kCli) + " " + args + " >" + so.string() + " 2>" + se.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp_file(so);
  r.err = slurp_file(se);
  return r;
}

std::string fixture(const std::string& name) {
  return (fs::path(kFixtureDir) / name).string();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const std::string kChainNet = "A = 1\nB = A\nC = !B\noutput Y = C\n";

}  // namespace

TEST_CASE("check reports the full story for an unobservable model") {
  RunResult r = run_cli("check " + fixture("t_lgl.bn"));
  CHECK(r.code == 2);
  CHECK(r.err.empty());
  CHECK(contains(r.out, "18 states, 3 sensors, 0 inputs, max in-degree 3"));
  CHECK(contains(r.out, "augmentation: collapse"));
  CHECK(contains(r.out,
                 "sufficient condition fails (P1 violated at X5, X7, X8, X12, X13, X15)"));
  CHECK(contains(r.out, "no observed-path decomposition found"));
  CHECK(contains(r.out, "oracle: state space 2^18 = 262144 states (~7.0 MiB)"));
  CHECK(contains(r.out, "oracle: UNOBSERVABLE; 448 distinguishable classes of 262144 states"));
  CHECK(contains(r.out, "witness: 000100000000000000 {X4} vs 000101000000000000 {X4, X6}"));
  CHECK(contains(r.out, "verdict: unobservable"));
  CHECK_FALSE(contains(r.out, "timings:"));

  // byte-identical without --timings
  RunResult again = run_cli("check " + fixture("t_lgl.bn"));
  CHECK(again.out == r.out);
  CHECK(again.code == r.code);

  RunResult timed = run_cli("check --timings " + fixture("t_lgl.bn"));
  CHECK(contains(timed.out, "timings: parse "));
}

TEST_CASE("check emits machine-readable json") {
  RunResult r = run_cli("check --format json " + fixture("t_lgl.bn"));
  CHECK(r.code == 2);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "check");
  CHECK(j["network"]["states"] == 18);
  CHECK(j["structural"]["decomposes"] == false);
  CHECK(j["structural"]["p1_violations"].size() == 6);
  CHECK(j["oracle"]["observable"] == false);
  CHECK(j["oracle"]["classes"] == 448);
  CHECK(j["oracle"]["witness"]["a"] == "000100000000000000");
  CHECK(j["oracle"]["witness"]["b_true"] == nlohmann::json::array({"X4", "X6"}));
  CHECK(j["verdict"] == "unobservable");
  CHECK_FALSE(j.contains("timings_us"));

  RunResult timed = run_cli("check --format json --timings " + fixture("t_lgl.bn"));
  auto jt = nlohmann::json::parse(timed.out);
  CHECK(jt.contains("timings_us"));
}

TEST_CASE("check certifies a decomposable chain") {
  const fs::path net = scratch() / "chain.bn";
  spill_file(net, kChainNet);
  RunResult r = run_cli("check " + net.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "P1 holds at every non-directly-observable vertex"));
  CHECK(contains(r.out, "decomposes; observable"));
  CHECK(contains(r.out, "path 1: A -> B -> C => Y"));
  CHECK(contains(r.out, "verdict: observable"));
}

TEST_CASE("check without oracle headroom stays honest") {
  RunResult r = run_cli("check --oracle-cap 10 " + fixture("t_lgl.bn"));
  CHECK(r.code == 2);
  CHECK(contains(r.out, "oracle: skipped; 2^18 states (~7.0 MiB) exceeds the cap 2^10 "
                        "(raise --oracle-cap to force it)"));
  CHECK(contains(r.out, "verdict: not certified (structural condition inconclusive; "
                        "oracle infeasible)"));
}

TEST_CASE("oracle subcommand gives the exhaustive verdict") {
  RunResult r = run_cli("oracle " + fixture("two_pair_cycles.bn"));
  CHECK(r.code == 2);
  CHECK(contains(r.out, "witness: 0000 {} vs 0010 {X3}"));
  CHECK(contains(r.out, "verdict: unobservable"));

  RunResult over = run_cli("oracle --oracle-cap 3 " + fixture("two_pair_cycles.bn"));
  CHECK(over.code == 1);
  CHECK(contains(over.err, "error: state space 2^4 exceeds the enumeration cap 2^3"));

  const fs::path net = scratch() / "chain.bn";
  spill_file(net, kChainNet);
  RunResult ok = run_cli("oracle " + net.string());
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "oracle: OBSERVABLE; all 8 states distinguishable"));
}

TEST_CASE("oracle respects fixed inputs") {
  const fs::path net = scratch() / "with_input.bn";
  spill_file(net, "input U\nA = U\noutput Y = A\n");
  RunResult r = run_cli("oracle --inputs U=1 " + net.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "inputs fixed: U=1"));

  RunResult bad = run_cli("oracle --inputs V=1 " + net.string());
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "error: 'V' is not an input of the network"));
}

TEST_CASE("pin writes a verified network") {
  const fs::path out = scratch() / "t_lgl_pinned.bn";
  RunResult r = run_cli("pin --out " + out.string() + " " + fixture("t_lgl.bn"));
  CHECK(r.code == 0);
  CHECK(contains(r.out,
                 "plan (greedy): 3 observed paths; 6 pins (1 type 1, 5 type 2, 0 type 3); "
                 "cost 7"));
  CHECK(contains(r.out, "path 2: X9 -> X8 -> X10 -> X17 -> X6 -> X7 -> X4 -> X3 => Y2"));
  CHECK(contains(r.out, "pin X13: type 1, pred X5, op XOR, g = X5 <-> X11"));
  CHECK(contains(r.out, "verification: output re-parses; wiring decomposes into the planned "
                        "paths"));
  CHECK(contains(r.out, "verdict: pinned network observable"));

  std::string pinned = slurp_file(out);
  CHECK(contains(pinned, "# pinned network (greedy planner)"));
  CHECK(contains(pinned, "X13 = X5"));

  RunResult check = run_cli("check " + out.string());
  CHECK(check.code == 0);
  CHECK(contains(check.out, "decomposes; observable"));
  CHECK(contains(check.out, "verdict: observable"));
}

TEST_CASE("pin with the cover planner reports its matching") {
  const fs::path out = scratch() / "t_lgl_cover.bn";
  RunResult r =
      run_cli("pin --planner cover --out " + out.string() + " " + fixture("t_lgl.bn"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "plan (cover): 3 observed paths; 6 pins"));
  CHECK(contains(r.out, "path cover: 4 chains, matching size 17, 1 cycle breaks"));
  CHECK(contains(r.out, "verdict: pinned network observable"));

  RunResult j = run_cli("pin --planner cover --format json --out " + out.string() + " " +
                        fixture("t_lgl.bn"));
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["plan"]["cover"]["matching_size"] == 17);
  CHECK(parsed["plan"]["counts"]["type2"] == 5);
  CHECK(parsed["synthesis"].size() == 6);
  CHECK(parsed["verification"]["decomposes_into_plan"] == true);
  CHECK(parsed["verdict"] == "pinned network observable");
}

TEST_CASE("pin on an observable network is a no-op") {
  const fs::path net = scratch() / "chain.bn";
  spill_file(net, kChainNet);
  const fs::path out = scratch() / "chain_pinned.bn";
  RunResult r = run_cli("pin --out " + out.string() + " " + net.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "network is observable; no pins required"));
  CHECK(contains(r.out, "verdict: observable without pins"));
  CHECK(contains(slurp_file(out), "# no pins required"));
}

TEST_CASE("pin honors custom cost weights") {
  const fs::path out = scratch() / "t_lgl_weighted.bn";
  RunResult r = run_cli("pin --cost 10,1,10 --out " + out.string() + " " + fixture("t_lgl.bn"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "cost 15"));

  RunResult bad = run_cli("pin --cost 1,2 --out " + out.string() + " " + fixture("t_lgl.bn"));
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "error:"));
}

TEST_CASE("graph renders DOT on stdout or to a file") {
  RunResult r = run_cli("graph " + fixture("t_lgl.bn"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "digraph wiring"));
  CHECK(contains(r.out, "rankdir=LR"));
  CHECK_FALSE(contains(r.out, "color=red"));

  const fs::path out = scratch() / "t_lgl.dot";
  RunResult f = run_cli("graph --plan --out " + out.string() + " " + fixture("t_lgl.bn"));
  CHECK(f.code == 0);
  CHECK(contains(f.out, "21 vertices"));
  CHECK(contains(f.out, "plan overlay with 6 pins"));
  std::string dot = slurp_file(out);
  CHECK(contains(dot, "digraph wiring"));
  CHECK(contains(dot, "color=red"));
  CHECK(contains(dot, "pin t1 <- X5"));
}

TEST_CASE("bench walks a corpus directory") {
  RunResult r = run_cli("bench " + std::string(kFixtureDir));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("file,states,sensors,inputs,max_in_degree,parse_us,structural_us,"
                    "greedy_us,greedy_pins,greedy_cost,cover_us,cover_pins,cover_cost,"
                    "synth_us,oracle_feasible,oracle_us,oracle_observable\n",
                    0) == 0);
  CHECK(contains(r.out, "\nt_lgl.bn,18,3,0,3,"));
  CHECK(contains(r.out, "\ntcr_signaling.bn,37,4,3,5,"));
  CHECK(contains(r.out, "\ntwo_pair_cycles.bn,4,1,0,1,"));

  // the 37-state model is over the default oracle cap: flag 0, empty fields
  std::size_t tcr = r.out.find("\ntcr_signaling.bn");
  std::size_t eol = r.out.find('\n', tcr + 1);
  std::string row = r.out.substr(tcr + 1, eol - tcr - 1);
  CHECK(row.substr(row.size() - 4) == ",0,,");

  const fs::path csv = scratch() / "bench.csv";
  RunResult f = run_cli("bench --out " + csv.string() + " " + std::string(kFixtureDir));
  CHECK(f.code == 0);
  CHECK(contains(f.out, "benchmarked 3 networks"));
  CHECK(slurp_file(csv).rfind("file,states,", 0) == 0);

  const fs::path empty = scratch() / "empty_corpus";
  fs::create_directories(empty);
  RunResult e = run_cli("bench " + empty.string());
  CHECK(e.code == 0);
  CHECK(e.out ==
        "file,states,sensors,inputs,max_in_degree,parse_us,structural_us,greedy_us,"
        "greedy_pins,greedy_cost,cover_us,cover_pins,cover_cost,synth_us,oracle_feasible,"
        "oracle_us,oracle_observable\n");
}

TEST_CASE("bad invocations exit nonzero") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("check").code == 1);
  CHECK(run_cli("check --no-such-flag x.bn").code == 1);
  CHECK(run_cli("frobnicate x.bn").code == 1);

  RunResult missing = run_cli("check " + (scratch() / "does_not_exist.bn").string());
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "error:"));

  const fs::path broken = scratch() / "broken.bn";
  spill_file(broken, "A = B &\n");
  RunResult parse = run_cli("check " + broken.string());
  CHECK(parse.code == 1);
  CHECK(contains(parse.err, "error:"));
}

TEST_CASE("augmentation mode flags") {
  const fs::path net = scratch() / "expr_sensor.bn";
  spill_file(net, "A = !A\nB = A\noutput Y = A & B\n");

  RunResult gen = run_cli("check " + net.string());
  CHECK(contains(gen.out, "augmentation: generic (1 virtual states added)"));

  RunResult forced = run_cli("check --collapse " + net.string());
  CHECK(forced.code == 1);
  CHECK(contains(forced.err, "error:"));

  RunResult both = run_cli("check --collapse --augment " + net.string());
  CHECK(both.code == 1);
}
