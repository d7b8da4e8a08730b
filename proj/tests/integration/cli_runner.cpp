// End-to-end checks of the triform binary: exit codes, output files, and
// byte-reproducibility of machine-readable outputs.
//
// usage: cli_runner <path-to-triform> <data-dir> [doctest args...]

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_binary;
fs::path g_data;
fs::path g_work;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const fs::path out_file = g_work / "cmd_output.txt";
  const std::string cmd =
      g_binary + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string scenario(const char* name) {
  return (g_data / name).string();
}

}  // namespace

TEST_CASE("generate is deterministic and validates N") {
  const auto a = g_work / "a.txt", b = g_work / "b.txt", c = g_work / "c.txt";
  CHECK(run("generate --n 6 --seed 9 --out " + a.string()).exit_code == 0);
  CHECK(run("generate --n 6 --seed 9 --out " + b.string()).exit_code == 0);
  CHECK(run("generate --n 6 --seed 10 --out " + c.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));

  CHECK(run("generate --n 1 --out " + (g_work / "x.txt").string()).exit_code == 2);
}

TEST_CASE("validate distinguishes good, bad, and unparsable scenarios") {
  CHECK(run("validate --scenario " + scenario("triangle.scenario.json")).exit_code == 0);

  const RunResult bad =
      run("validate --scenario " + scenario("bad_targets.scenario.json"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("(1,2,3)") != std::string::npos);

  CHECK(run("validate --scenario " + (g_data / "missing.json").string()).exit_code == 2);

  const fs::path garbage = g_work / "garbage.json";
  std::ofstream(garbage) << "{not json";
  CHECK(run("validate --scenario " + garbage.string()).exit_code == 2);
}

TEST_CASE("simulate writes a trajectory, final state, and manifest") {
  const fs::path out = g_work / "sim";
  const RunResult r = run("simulate --scenario " +
                          scenario("triangle.scenario.json") + " --out-dir " +
                          out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "final_state.txt"));
  CHECK(fs::exists(out / "equilibrium.json"));
  CHECK(fs::exists(out / "manifest.json"));

  const std::string traj = slurp(out / "trajectory.csv");
  CHECK(traj.rfind("t,x1,y1,x2,y2,x3,y3,phi,grad_inf\n", 0) == 0);

  // same seed, same bytes
  const fs::path out2 = g_work / "sim2";
  CHECK(run("simulate --scenario " + scenario("triangle.scenario.json") +
            " --out-dir " + out2.string()).exit_code == 0);
  CHECK(slurp(out / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
  CHECK(slurp(out / "final_state.txt") == slurp(out2 / "final_state.txt"));
}

TEST_CASE("simulate rejects configurations outside P_G") {
  const fs::path p0 = g_work / "coincident.txt";
  std::ofstream(p0) << "0 0\n0 0\n1 1\n";
  const RunResult r = run("simulate --scenario " +
                          scenario("triangle.scenario.json") + " --p0 " +
                          p0.string() + " --out-dir " + (g_work / "simbad").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("P_G") != std::string::npos);

  const fs::path corrupt = g_work / "corrupt.txt";
  std::ofstream(corrupt) << "0 0\nnope\n";
  CHECK(run("simulate --scenario " + scenario("triangle.scenario.json") +
            " --p0 " + corrupt.string() + " --out-dir " +
            (g_work / "simbad2").string()).exit_code == 2);
}

TEST_CASE("simulate from an exact equilibrium yields a one-row trajectory") {
  const fs::path p0 = g_work / "equilateral.txt";
  std::ofstream(p0) << "0 0\n1 0\n0.5 0.86602540378443871\n";
  const fs::path out = g_work / "simeq";
  CHECK(run("simulate --scenario " + scenario("triangle.scenario.json") +
            " --p0 " + p0.string() + " --out-dir " + out.string()).exit_code == 0);
  const std::string traj = slurp(out / "trajectory.csv");
  // header plus a single snapshot row
  CHECK(std::count(traj.begin(), traj.end(), '\n') == 2);
}

TEST_CASE("spectrum classifies the collinear saddle and checks the index sums") {
  const fs::path cfg = g_work / "saddle.txt";
  std::ofstream(cfg) << "0 0\n-0.70710678118654757 0\n0.70710678118654757 0\n";
  const RunResult r = run("spectrum --scenario " +
                          scenario("triangle.scenario.json") + " --config " +
                          cfg.string() + " --out-dir " +
                          (g_work / "specsaddle").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("unstable-saddle") != std::string::npos);
  CHECK(r.output.find("(1, 2, 3)") != std::string::npos);
  CHECK(r.output.find("index formula: holds") != std::string::npos);
}

TEST_CASE("rows format emits machine-readable lines") {
  const RunResult r = run("validate --scenario " +
                          scenario("triangle.scenario.json") + " --format rows");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("validate,graph_ok,1") != std::string::npos);
  CHECK(r.output.find("validate,targets_ok,1") != std::string::npos);
}

TEST_CASE("spectrum classifies a simulated endpoint as stable") {
  const fs::path out = g_work / "sim";
  REQUIRE(fs::exists(out / "final_state.txt"));
  const RunResult r = run("spectrum --scenario " +
                          scenario("triangle.scenario.json") + " --config " +
                          (out / "final_state.txt").string() + " --out-dir " +
                          (g_work / "spec").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("stable") != std::string::npos);
  CHECK(fs::exists(g_work / "spec" / "spectrum.json"));
}

TEST_CASE("partition reports blocks for a collinear configuration") {
  const fs::path cfg = g_work / "line.txt";
  std::ofstream(cfg) << "0 0\n1 0\n2.2 0\n";
  const RunResult r = run("partition --scenario " +
                          scenario("triangle.scenario.json") + " --config " +
                          cfg.string() + " --out-dir " + (g_work / "part").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("1 blocks") != std::string::npos);
}

TEST_CASE("enumerate emits a reproducible catalog") {
  const fs::path out1 = g_work / "cat1", out2 = g_work / "cat2";
  const RunResult r1 = run("enumerate --scenario " +
                           scenario("five_vertex.scenario.json") + " --out-dir " +
                           out1.string());
  CHECK(r1.exit_code == 0);
  CHECK(r1.output.find("8 orbits") != std::string::npos);
  CHECK(run("enumerate --scenario " + scenario("five_vertex.scenario.json") +
            " --out-dir " + out2.string()).exit_code == 0);
  CHECK(slurp(out1 / "catalog.json") == slurp(out2 / "catalog.json"));
}

TEST_CASE("equilibria finds the collinear saddles") {
  const RunResult r = run("equilibria --scenario " +
                          scenario("triangle.scenario.json") + " --out-dir " +
                          (g_work / "eq").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("3 distinct line equilibria") != std::string::npos);
  CHECK(r.output.find("unstable-saddle") != std::string::npos);
}

TEST_CASE("basin report is deterministic given the seed") {
  const fs::path out1 = g_work / "basin1", out2 = g_work / "basin2";
  const std::string args = "basin --scenario " +
                           scenario("triangle.scenario.json") +
                           " --trials 50 --out-dir ";
  CHECK(run(args + out1.string()).exit_code == 0);
  CHECK(run(args + out2.string()).exit_code == 0);
  CHECK(slurp(out1 / "basin.json") == slurp(out2 / "basin.json"));
}

TEST_CASE("verify passes on a conforming scenario and fails on bad targets") {
  const RunResult good = run("verify --scenario " +
                             scenario("triangle.scenario.json") +
                             " --trials 60 --min-target-fraction 0.95 "
                             "--out-dir " + (g_work / "verify").string());
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("VERIFY PASS") != std::string::npos);

  const RunResult bad = run("verify --scenario " +
                            scenario("bad_targets.scenario.json") +
                            " --out-dir " + (g_work / "verifybad").string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("[FAIL] validate") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("simulate").exit_code == 2);           // missing --scenario
  CHECK(run("unknown-subcommand").exit_code == 2);
  CHECK(run("basin --scenario " + scenario("triangle.scenario.json") +
            " --trials 0 --out-dir " + (g_work / "b0").string()).exit_code == 2);
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_runner <triform-binary> <data-dir>\n");
    return 1;
  }
  g_binary = argv[1];
  g_data = argv[2];
  g_work = fs::temp_directory_path() / "triform-cli-tests";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  doctest::Context context;
  context.applyCommandLine(argc - 2, argv + 2);
  return context.run();
}
