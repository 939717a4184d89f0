#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_file(const std::string& stem) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("cones_cli_" + std::to_string(::getpid()) + "_" +
          std::to_string(counter++) + "_" + stem);
}

CliResult run_cli(const std::string& args) {
  fs::path outP = scratch_file("stdout"), errP = scratch_file("stderr");
  std::string cmd = std::string("\"") + CONES_CLI_PATH + "\" " + args + " > " +
                    outP.string() + " 2> " + errP.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(outP);
  r.err = slurp(errP);
  fs::remove(outP);
  fs::remove(errP);
  return r;
}

}  // namespace

TEST_CASE("run: report shape for a built-in program") {
  CliResult r = run_cli("run square-let");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["command"] == "run");
  CHECK(j["inputs"]["digest"].get<std::string>().size() == 16);
  CHECK(j["inputs"]["grid"]["bins"] == 16384);
  CHECK(j["outputs"]["total_mass"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["outputs"]["measure"]["space"]["kind"] == "grid");
  CHECK(j["diagnostics"]["lost_mass"].get<double>() == 0.0);
  CHECK(j["diagnostics"]["fix_converged"].get<bool>());
  // Timing goes to stderr so stdout stays comparable across runs.
  CHECK(r.err.find("wall time") != std::string::npos);
  CHECK(r.out.find("wall time") == std::string::npos);
}

TEST_CASE("run: histogram csv over an explicit grid") {
  CliResult r = run_cli("run geometric --csv --grid=-0.5,63.5,64");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("bin_lo,bin_hi,mass\n", 0) == 0);
  int lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 65);  // header + one row per bin
  // The first bin holds the mass at 0, which is exactly one half.
  CHECK(r.out.find("\n-0.5,0.5,0.5\n") != std::string::npos);
}

TEST_CASE("run: user errors exit with 1") {
  CliResult missing = run_cli("run /no/such/file.ppcf");
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error") != std::string::npos);

  fs::path bad = scratch_file("bad.ppcf");
  std::ofstream(bad) << "plus(unif, lam x: real. x)";
  CliResult illTyped = run_cli("run " + bad.string());
  CHECK(illTyped.code == 1);
  fs::remove(bad);

  fs::path chopped = scratch_file("chopped.ppcf");
  std::ofstream(chopped) << "mult(x";
  CliResult syntax = run_cli("run " + chopped.string());
  CHECK(syntax.code == 1);
  CHECK(syntax.err.find("error") != std::string::npos);
  fs::remove(chopped);

  CHECK(run_cli("run square-let --grid=1,0,16").code == 1);
}

TEST_CASE("fix: families against their closed forms") {
  CliResult r = run_cli("fix halfplus");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  double v = j["outputs"]["value"].get<double>();
  CHECK(std::abs(v - (2.0 - std::sqrt(2.0))) <= 1e-9);
  CHECK(j["outputs"]["converged"].get<bool>());
  CHECK(j["outputs"]["iterations"].get<long>() <= 200);

  json s = json::parse(run_cli("fix sqrtfam 0.75").out);
  CHECK(std::abs(s["outputs"]["value"].get<double>() - 0.5) <= 1e-8);

  json p = json::parse(run_cli("fix pathological 0").out);
  CHECK(p["outputs"]["value"].get<double>() == 0.0);
  CHECK(p["outputs"]["iterations"].get<long>() == 1);

  CHECK(run_cli("fix nosuchfamily").code == 1);
  CHECK(run_cli("fix sqrtfam 1.5").code == 1);
  CHECK(run_cli("fix halfplus 0.3").code == 1);  // takes no parameter
  CHECK(run_cli("fix sqrtfam").code == 1);       // wants a parameter
}

TEST_CASE("fix: trace file lists every iteration") {
  fs::path trace = scratch_file("trace.csv");
  CliResult r = run_cli("fix halfplus --trace " + trace.string());
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  std::string csv = slurp(trace);
  fs::remove(trace);
  REQUIRE(csv.rfind("iteration,norm,delta\n", 0) == 0);
  int rows = -1;  // discount the header
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == j["outputs"]["iterations"].get<int>());
  CHECK(csv.find("\n1,") != std::string::npos);
}

TEST_CASE("check: suites pass and report their cases") {
  CliResult r = run_cli("check fubini --seed 7");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["inputs"]["suite"] == "fubini");
  CHECK(j["outputs"]["failed"].get<int>() == 0);
  CHECK(j["outputs"]["passed"].get<int>() >= 3);
  for (const auto& c : j["outputs"]["cases"]) {
    CHECK(c["pass"].get<bool>());
    CHECK(!c["name"].get<std::string>().empty());
  }

  CHECK(run_cli("check nosuchsuite").code == 1);
}

TEST_CASE("byte-identical reruns, including parallel ones") {
  CliResult a = run_cli("run square-let");
  CliResult b = run_cli("run square-let");
  CHECK(a.out == b.out);

  CliResult c1 = run_cli("check pcs --seed 11 --jobs 1");
  CliResult c6 = run_cli("check pcs --seed 11 --jobs 6");
  REQUIRE(c1.code == 0);
  REQUIRE(c6.code == 0);
  CHECK(c1.out == c6.out);

  // --out writes the same bytes the stdout path would.
  fs::path outFile = scratch_file("report.json");
  CliResult filed = run_cli("run square-let --out " + outFile.string());
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(outFile) == a.out);
  fs::remove(outFile);
}

TEST_CASE("cantor: random additive vectors and the fair coin") {
  CliResult r = run_cli("cantor --seed 5");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["inputs"]["depth"] == 3);
  CHECK(j["outputs"]["additive"].get<bool>());
  CHECK(j["outputs"]["antichain_norm"].get<double>() ==
        j["outputs"]["root_mass"].get<double>());
  CHECK(j["diagnostics"]["roundtrip_max_diff"].get<double>() == 0.0);
  CHECK(j["diagnostics"]["theta_max_diff"].get<double>() == 0.0);

  json coin = json::parse(run_cli("cantor --coin --depth 8").out);
  CHECK(coin["outputs"]["root_mass"].get<double>() == 1.0);
  CHECK(coin["outputs"]["antichain_norm"].get<double>() == 1.0);
  CHECK(coin["outputs"]["leaf_total"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK(run_cli("cantor --depth 15").code == 1);  // depth capped at 12
}

TEST_CASE("examples: closed-form checks by name") {
  for (const std::string name :
       {"fixpoint-halfplus", "geometric", "square-let", "cantor-coin"}) {
    CAPTURE(name);
    CliResult r = run_cli("examples " + name);
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["outputs"]["all_pass"].get<bool>());
    CHECK(j["outputs"]["examples"].size() == 1);
  }
  CHECK(run_cli("examples nosuchexample").code == 1);
}

TEST_CASE("top-level argument handling") {
  CHECK(run_cli("").code == 1);          // a subcommand is required
  CHECK(run_cli("frobnicate").code == 1);
  CHECK(run_cli("--help").code == 0);
  CliResult help = run_cli("run --help");
  CHECK(help.code == 0);
  CHECK(help.out.find("--grid") != std::string::npos);
}
