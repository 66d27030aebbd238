#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "catch_amalgamated.hpp"
#include "json.hpp"

using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code{};
  std::string out;
};

/// Runs the CLI with `args`, capturing stdout. `env` is prepended verbatim.
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" CHROMA_CLI_PATH "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  Result r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("chroma_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("classify the region-6 example") {
  const auto r = run("classify --ul 1,-3 --ur 8,-5.66");
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["region"] == 6);
  CHECK_THAT(j["s"].get<double>(), WithinAbs(0.3275, 1e-12));
  CHECK_THAT(j["k"].get<double>(), WithinAbs(0.00385, 1e-12));
  CHECK(j["overcompressive"] == true);
}

TEST_CASE("solve a trivial datum") {
  const auto r = run("solve --ul 1,-3 --ur 1,-3");
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["region"] == 1);
  CHECK(j["waves"].is_array());
  CHECK(j["waves"].empty());
}

TEST_CASE("gspt-check roots and eigenvalues") {
  const auto r = run("gspt-check");
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  REQUIRE(j["roots"].size() == 2);
  CHECK_THAT(j["roots"][0].get<double>(), WithinAbs(0.0, 1e-10));
  CHECK_THAT(j["roots"][1].get<double>(), WithinAbs(1.370351, 1e-6));
  const auto& e = j["equilibria"];
  CHECK_THAT(e[0]["eigen_a"].get<double>(), WithinAbs(10.0 / 11.0, 1e-6));
  CHECK_THAT(e[1]["eigen_a"].get<double>(), WithinAbs(-2.0, 1e-6));
  CHECK_THAT(e[1]["eigen_r"].get<double>(), WithinAbs(-7.5, 1e-6));
  CHECK_THAT(e[1]["eigen_b"].get<double>(), WithinAbs(7.5, 1e-6));
}

TEST_CASE("output is byte-identical across runs") {
  for (const char* args : {"classify --ul 1,-3 --ur 8,-5.66", "solve --ul 1,-3 --ur 2.5,-4.6",
                           "gspt-check", "validate"}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("numbers carry at most 12 significant digits") {
  const auto j = parse(run("classify --ul 1,-3 --ur 8,-5.66"));
  const double l1 = j["lambda1_left"].get<double>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", l1);
  CHECK(std::strtod(buf, nullptr) == l1);
}

TEST_CASE("config file and flag precedence") {
  const auto dir = scratch("config");
  const auto cfg = dir / "config.json";
  {
    std::FILE* f = std::fopen(cfg.c_str(), "w");
    REQUIRE(f);
    std::fputs("{\"ul\": [1, -3], \"ur\": \"8,-5.66\", \"tol\": 1e-9}", f);
    std::fclose(f);
  }
  const std::string env = "CHROMA_CONFIG='" + cfg.string() + "'";
  const auto a = run("classify", env);
  REQUIRE(a.code == 0);
  CHECK(parse(a)["region"] == 6);
  // The flag overrides the file.
  const auto b = run("classify --ur 1,-3", env);
  REQUIRE(b.code == 0);
  CHECK(parse(b)["region"] == 1);

  const auto bad = dir / "bad.json";
  {
    std::FILE* f = std::fopen(bad.c_str(), "w");
    std::fputs("{\"nonsense\": 1}", f);
    std::fclose(f);
  }
  CHECK(run("classify", "CHROMA_CONFIG='" + bad.string() + "'").code == 1);
  CHECK(run("classify", "CHROMA_CONFIG=/nonexistent/chroma.json").code == 1);
}

TEST_CASE("exit codes") {
  CHECK(run("classify --ul 1,-1 --ur 8,-5.66").code == 1);
  CHECK(run("classify --bogus").code == 1);
  CHECK(run("no-such-command").code == 1);
  CHECK(run("simulate --cfl 0.9 --n 100").code == 1);
  CHECK(run("validate").code == 0);
  // Rounding-level errors exceed an impossible tolerance.
  CHECK(run("validate --tol 1e-300").code == 2);
}

TEST_CASE("file outputs under --out") {
  const auto dir = scratch("out");
  const std::string o = " --out '" + dir.string() + "'";
  REQUIRE(run("classify" + o).code == 0);
  CHECK(fs::exists(dir / "classify.json"));
  REQUIRE(run("curves" + o).code == 0);
  CHECK(fs::exists(dir / "curves.csv"));
  REQUIRE(run("profile" + o).code == 0);
  CHECK(fs::exists(dir / "profile.csv"));
  REQUIRE(run("inner" + o).code == 0);
  CHECK(fs::exists(dir / "inner_orbit.csv"));
  const auto sim = run("simulate --n 200 --t-end 1" + o);
  REQUIRE(sim.code == 0);
  CHECK(fs::exists(dir / "simulate.json"));
  CHECK(fs::exists(dir / "snapshot_000.csv"));
  const auto j = parse(sim);
  for (const char* k : {"s_hat", "k_hat", "peaks", "refinement_table"}) CHECK(j.contains(k));
}
