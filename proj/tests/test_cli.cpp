#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "irsopt/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "irsopt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = irsopt::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("irsopt_cli_" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string data = IRSOPT_TEST_DATA;

}  // namespace

TEST_CASE("run writes traces and one summary row per controller") {
  TempDir dir("run");
  const auto r = run({"run", "--set", "horizon_slots=30", "--controllers", "proposed,without_irs", "--out",
                      dir.path.string()});
  REQUIRE(r.code == 0);
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(count_lines(summary) == 3);
  CHECK(summary.find("\nproposed,") != std::string::npos);
  CHECK(summary.find("\nwithout_irs,") != std::string::npos);
  CHECK(count_lines(slurp(dir / "trace_proposed.csv")) == 31);
  CHECK(count_lines(slurp(dir / "state_without_irs.csv")) == 1 + 30 * 10);
  CHECK(r.out.find("without_irs") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical files") {
  TempDir a("seed_a"), b("seed_b"), c("seed_c");
  const std::vector<std::string> base{"run", "--config", data + "/small.json", "--seed", "7"};
  auto args = base;
  args.insert(args.end(), {"--out", a.path.string()});
  REQUIRE(run(args).code == 0);
  args = base;
  args.insert(args.end(), {"--out", b.path.string(), "--runs", "1", "--jobs", "2"});
  REQUIRE(run(args).code == 0);
  REQUIRE(run({"run", "--config", data + "/small.json", "--seed", "8", "--out", c.path.string()}).code == 0);
  for (const char* f : {"summary.csv", "trace_proposed.csv", "state_random_phase.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK(!slurp(a / f).empty());
  }
  CHECK(slurp(a / "state_proposed.csv") != slurp(c / "state_proposed.csv"));
}

TEST_CASE("usage errors exit with 2") {
  const auto bad = run({"run", "--controllers", "proposed,greedy", "--out", "unused"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("greedy") != std::string::npos);
  CHECK(bad.err.find("random_phase") != std::string::npos);
  CHECK_FALSE(fs::exists("unused"));

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"run", "--runs", "zero"}).code == 2);
  CHECK(run({"sweep", "--axis", "V"}).code == 2);
  CHECK(run({"sweep", "--axis", "L", "--values", "1"}).code == 2);
  CHECK(run({"sweep", "--axis", "V", "--values", "5,x"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config errors name the offending key") {
  const auto type = run({"validate-config", "--config", data + "/bad_type.json"});
  CHECK(type.code == 2);
  CHECK(type.err.find("horizon_slots") != std::string::npos);
  const auto syntax = run({"validate-config", "--config", data + "/malformed.json"});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("4:") != std::string::npos);
  CHECK(run({"validate-config", "--config", data + "/missing.json"}).code == 2);
  CHECK(run({"validate-config", "--set", "num_devices=-3"}).code == 2);
}

TEST_CASE("validate-config prints a canonical scenario and writes nothing") {
  TempDir dir("validate");
  const auto r = run({"validate-config", "--config", data + "/small.json", "--set", "control_param=500"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"num_devices\": 4") != std::string::npos);
  CHECK(r.out.find("\"control_param\": 500") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path));

  // the printed form parses back to itself
  fs::create_directories(dir.path);
  std::ofstream(dir / "echo.json") << r.out;
  const auto again = run({"validate-config", "--config", dir / "echo.json"});
  CHECK(again.code == 0);
  CHECK(again.out == r.out);
}

TEST_CASE("sweep writes a table and plot data") {
  TempDir dir("sweep");
  const auto r = run({"sweep", "--set", "horizon_slots=20", "--axis", "K", "--values", "4,8,12", "--controllers",
                      "proposed,random_phase", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  CHECK(count_lines(slurp(dir / "sweep_K.csv")) == 1 + 3 * 2);
  CHECK(slurp(dir / "plot_K.csv").rfind("K,proposed,random_phase\n", 0) == 0);
  CHECK(count_lines(slurp(dir / "plot_K.csv")) == 4);

  const auto n = run({"sweep", "--axis", "N", "--values", "30", "--out", dir.path.string()});
  CHECK(n.code == 2);
  CHECK(n.err.find("not a multiple") != std::string::npos);
}

TEST_CASE("oracle-check") {
  const auto ok = run({"oracle-check", "--trials", "5"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("all oracle checks passed") != std::string::npos);

  const auto big = run({"oracle-check", "--set", "elements_x=16", "--set", "phase_bits=3"});
  CHECK(big.code == 2);
  CHECK(big.err.find("budget") != std::string::npos);
}

TEST_CASE("convergence writes one series per device count") {
  TempDir dir("conv");
  const auto r = run({"convergence", "--values", "3,6", "--slots", "5", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "convergence.csv");
  CHECK(csv.rfind("series,iteration,objective\nK=3,0,", 0) == 0);
  CHECK(csv.find("\nK=6,0,") != std::string::npos);
}

TEST_CASE("channel trace replay reproduces the run") {
  TempDir dir("replay");
  const std::string trace = dir / "channels.csv";
  REQUIRE(run({"run", "--set", "horizon_slots=10", "--controllers", "proposed", "--channel-trace", trace, "--out",
               dir / "a"})
              .code == 0);
  REQUIRE(run({"run", "--set", "horizon_slots=10", "--controllers", "proposed", "--replay", trace, "--out",
               dir / "b"})
              .code == 0);
  CHECK(slurp(dir / "a/state_proposed.csv") == slurp(dir / "b/state_proposed.csv"));
  CHECK(run({"run", "--runs", "2", "--replay", trace, "--out", dir / "c"}).code == 2);
}
