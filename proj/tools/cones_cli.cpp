// cones: batch front end for the measure/coherence-space workbench.
//
// Subcommands: run (evaluate a program file), fix (Kleene fixpoint on a
// built-in family), check (property suites), cantor (tree-vector demo),
// examples (worked examples against their closed forms).
//
// Exit codes: 0 success, 1 user error (syntax, types, unknown names),
// 2 broken internal contract. Reports are JSON with a stable key order;
// wall time goes to stderr so reruns stay byte-identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cones/cantor.hpp"
#include "cones/fixpoint.hpp"
#include "cones/json_io.hpp"
#include "cones/ppcf.hpp"
#include "cones/programs.hpp"
#include "cones/suites.hpp"

namespace {

using cones::FiniteMeasure;
using cones::Json;
using cones::structural_error;
using cones::ppcf::GridConfig;

struct CommonFlags {
  std::string out;
  std::string gridSpec;
  std::uint64_t seed = 0;
  long fixUnfold = 64;
  double fixTol = 1e-12;
  double pruneFloor = 1e-15;
  int jobs = 1;
};

GridConfig make_config(const CommonFlags& flags, GridConfig base) {
  if (!flags.gridSpec.empty()) {
    double lo = 0, hi = 0;
    int bins = 0;
    if (std::sscanf(flags.gridSpec.c_str(), "%lf,%lf,%d", &lo, &hi, &bins) !=
            3 ||
        bins <= 0 || !(hi > lo))
      throw structural_error("--grid wants lo,hi,bins with hi > lo, bins > 0");
    base.lo = lo;
    base.hi = hi;
    base.bins = bins;
  }
  base.fixUnfoldBound = flags.fixUnfold;
  base.fixTol = flags.fixTol;
  base.pruneFloor = flags.pruneFloor;
  return base;
}

Json grid_json(const GridConfig& cfg) {
  Json j;
  j["lo"] = cfg.lo;
  j["hi"] = cfg.hi;
  j["bins"] = cfg.bins;
  return j;
}

void emit_text(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(outPath, std::ios::binary);
  if (!f) throw structural_error("cannot write " + outPath);
  f << text;
}

void emit_report(const Json& report, const std::string& outPath) {
  emit_text(report.dump(2) + "\n", outPath);
}

std::string read_program(const std::string& pathOrName) {
  std::ifstream f(pathOrName, std::ios::binary);
  if (f) {
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
  }
  for (const auto& [name, src] : cones::ppcf::programs::all())
    if (name == pathOrName) return src;
  throw structural_error("cannot read " + pathOrName +
                         " (not a file, not a built-in program)");
}

double measure_mean(const FiniteMeasure& mu) {
  double m1 = 0.0, tot = 0.0;
  for (const auto& [p, m] : mu.atoms()) {
    m1 += mu.space().center(p) * m;
    tot += m;
  }
  return tot > 0.0 ? m1 / tot : 0.0;
}

double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

// Total variation on the [-6,6]x1200 observation grid between the
// program output and N(0,1). The headline number discretizes the normal
// law on the evaluation grid (where the program's measures live) and
// carries both to the observation grid through the same rebinning, so it
// measures distributional error rather than bin-phase artifacts. The
// direct number integrates the density over the observation bins
// instead, which also charges the evaluation grid's quantization phase.
struct BoxmullerTv {
  double system = 0.0;
  double direct = 0.0;
};

BoxmullerTv boxmuller_tv(const FiniteMeasure& mu) {
  cones::Space target = cones::Space::grid(-6.0, 6.0, 1200);
  auto rebin = [&target](const FiniteMeasure& m) {
    return cones::pushforward_real(
        [](double r) { return std::optional<double>(r); }, m, target);
  };
  FiniteMeasure prog = rebin(mu);

  const cones::Space& wide = mu.space();
  FiniteMeasure gaussWide = FiniteMeasure::zero(wide);
  for (int k = 0; k < wide.size(); ++k) {
    double lo = wide.lo() + k * wide.width();
    gaussWide.accumulate(k, normal_cdf(lo + wide.width()) - normal_cdf(lo));
  }
  gaussWide.prune();
  FiniteMeasure gaussRebinned = rebin(gaussWide);

  BoxmullerTv tv;
  for (int i = 0; i < target.size(); ++i) {
    double lo = -6.0 + i * target.width();
    double direct = normal_cdf(lo + target.width()) - normal_cdf(lo);
    tv.system += std::abs(prog.mass(i) - gaussRebinned.mass(i));
    tv.direct += std::abs(prog.mass(i) - direct);
  }
  double tails = 2.0 * (1.0 - normal_cdf(6.0)) + mu.lost();
  tv.system = 0.5 * (tv.system + tails);
  tv.direct = 0.5 * (tv.direct + tails);
  return tv;
}

// ------------------------------------------------------------------ run

int cmd_run(const std::string& file, bool csv, const CommonFlags& flags) {
  std::string text = read_program(file);
  GridConfig cfg = make_config(flags, GridConfig{});
  auto diag = std::make_shared<cones::ppcf::EvalDiag>();
  FiniteMeasure mu = cones::ppcf::eval_program(text, cfg, diag);
  if (csv) {
    emit_text(cones::histogram_csv(mu), flags.out);
    return 0;
  }
  Json report;
  report["command"] = "run";
  report["inputs"]["file"] = file;
  report["inputs"]["digest"] = cones::hex64(cones::fnv1a64(text));
  report["inputs"]["grid"] = grid_json(cfg);
  report["inputs"]["prune_floor"] = cfg.pruneFloor;
  report["inputs"]["fix_unfold"] = cfg.fixUnfoldBound;
  report["inputs"]["fix_tol"] = cfg.fixTol;
  report["outputs"]["total_mass"] = mu.total();
  report["outputs"]["measure"] = cones::measure_to_json(mu);
  report["diagnostics"]["lost_mass"] = mu.lost();
  report["diagnostics"]["clamped_mass"] = mu.clamped();
  report["diagnostics"]["fix_observations"] = diag->fixObservations;
  report["diagnostics"]["fix_iterations_max"] = diag->fixIterationsMax;
  report["diagnostics"]["fix_converged"] = diag->fixConverged;
  report["diagnostics"]["fix_residual"] = diag->fixResidual;
  emit_report(report, flags.out);
  return 0;
}

// ------------------------------------------------------------------ fix

int cmd_fix(const std::string& family, const std::vector<double>& uArgs,
            long maxIter, const std::string& tracePath,
            const CommonFlags& flags) {
  std::function<double(double)> f;
  bool wantsU = (family == "sqrtfam" || family == "pathological");
  if (!wantsU && !uArgs.empty())
    throw structural_error(family + " takes no parameter");
  if (wantsU && uArgs.size() != 1)
    throw structural_error(family + " wants exactly one parameter u");
  double u = wantsU ? uArgs[0] : 0.0;
  if (family == "halfplus") {
    f = [](double x) { return 0.5 + x * x / 4.0; };
  } else if (family == "sqrtfam") {
    if (u < 0.0 || u > 1.0) throw structural_error("sqrtfam wants u in [0,1]");
    f = [u](double v) { return u / 2.0 + v * v / 2.0; };
  } else if (family == "pathological") {
    if (u < 0.0 || u > 1.0)
      throw structural_error("pathological wants u in [0,1]");
    f = [u](double v) { return u + v - u * v; };
  } else {
    throw structural_error("unknown family: " + family +
                           " (halfplus | sqrtfam u | pathological u)");
  }

  cones::FixpointResult res =
      cones::kleene_fixpoint1(f, flags.fixTol, maxIter, true);
  double residual = res.trace.empty() ? 0.0 : res.trace.back().delta;

  if (!tracePath.empty()) {
    std::ostringstream os;
    os << "iteration,norm,delta\n";
    for (const auto& row : res.trace)
      os << row.iteration << "," << cones::format_double(row.norm) << ","
         << cones::format_double(row.delta) << "\n";
    emit_text(os.str(), tracePath);
  }

  Json report;
  report["command"] = "fix";
  report["inputs"]["family"] = family;
  if (wantsU) report["inputs"]["u"] = u;
  report["inputs"]["tol"] = flags.fixTol;
  report["inputs"]["max_iter"] = maxIter;
  std::string key = family + "/" + cones::format_double(u);
  report["inputs"]["digest"] = cones::hex64(cones::fnv1a64(key));
  report["outputs"]["value"] = res.value[0];
  report["outputs"]["iterations"] = res.iterations;
  report["outputs"]["converged"] = res.converged;
  report["outputs"]["residual"] = residual;
  report["diagnostics"]["trace_rows"] = res.trace.size();
  emit_report(report, flags.out);
  return 0;
}

// ---------------------------------------------------------------- check

int cmd_check(const std::string& suite, const CommonFlags& flags) {
  cones::SuiteResult r = cones::run_suite(suite, flags.seed, flags.jobs);
  Json report;
  report["command"] = "check";
  report["inputs"]["suite"] = suite;
  report["inputs"]["seed"] = r.seed;
  report["inputs"]["digest"] =
      cones::hex64(cones::fnv1a64(suite + "/" + std::to_string(r.seed)));
  report["outputs"]["passed"] = r.passed();
  report["outputs"]["failed"] = r.failed();
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    cases.push_back(std::move(cj));
  }
  report["outputs"]["cases"] = std::move(cases);
  emit_report(report, flags.out);
  return r.failed() == 0 ? 0 : 1;
}

// --------------------------------------------------------------- cantor

int cmd_cantor(int depth, bool coin, const CommonFlags& flags) {
  cones::TreeVector x = [&] {
    if (coin) return cones::TreeVector::coin_flip(depth);
    cones::RngStream rng(flags.seed, 0xCA);
    std::map<std::string, double> cs;
    std::function<double(const std::string&)> fill =
        [&](const std::string& s) -> double {
      if (static_cast<int>(s.size()) == depth) return cs[s] = rng.uniform();
      double v = fill(s + "0") + fill(s + "1");
      return cs[s] = v;
    };
    fill("");
    return cones::TreeVector(depth, cs);
  }();

  FiniteMeasure leaves = cones::to_measure(x);
  cones::TreeVector back = cones::from_measure(leaves, depth);
  cones::TreeVector tx = cones::theta_apply(x);
  double thetaDiff = 0.0;
  for (const auto& [s, v] : x.coeffs())
    if (static_cast<int>(s.size()) < depth)
      thetaDiff = std::max(thetaDiff, std::abs(tx.at(s) - v));

  Json report;
  report["command"] = "cantor";
  report["inputs"]["depth"] = depth;
  report["inputs"]["mode"] = coin ? "coin" : "random-additive";
  report["inputs"]["seed"] = flags.seed;
  report["outputs"]["additive"] = cones::is_additive(x);
  report["outputs"]["root_mass"] = x.at("");
  report["outputs"]["antichain_norm"] = cones::antichain_norm(x);
  report["outputs"]["leaf_total"] = leaves.total();
  report["outputs"]["tree"] = cones::tree_to_json(x);
  report["diagnostics"]["roundtrip_max_diff"] = cones::tree_max_diff(x, back);
  report["diagnostics"]["theta_max_diff"] = thetaDiff;
  emit_report(report, flags.out);
  return 0;
}

// ------------------------------------------------------------- examples

int cmd_examples(const std::string& only, const CommonFlags& flags) {
  namespace programs = cones::ppcf::programs;
  Json list = Json::array();
  bool allPass = true;
  auto want = [&](const std::string& name) {
    return only.empty() || only == name;
  };
  bool matched = false;

  if (want("fixpoint-halfplus")) {
    matched = true;
    auto res = cones::kleene_fixpoint1(
        [](double x) { return 0.5 + x * x / 4.0; }, 1e-12, 200, false);
    double ref = 2.0 - std::sqrt(2.0);
    Json e;
    e["name"] = "fixpoint-halfplus";
    e["value"] = res.value[0];
    e["reference"] = ref;
    e["iterations"] = res.iterations;
    e["pass"] = res.converged && std::abs(res.value[0] - ref) <= 1e-9;
    allPass = allPass && e["pass"].get<bool>();
    list.push_back(std::move(e));
  }
  if (want("square-let")) {
    matched = true;
    FiniteMeasure mu = cones::ppcf::eval_program(
        programs::source("square-let"), programs::unit_grid());
    double mean = measure_mean(mu);
    Json e;
    e["name"] = "square-let";
    e["mean"] = mean;
    e["reference"] = 1.0 / 3.0;
    e["total_mass"] = mu.total();
    e["pass"] = std::abs(mean - 1.0 / 3.0) <= 2.0 / 512;
    allPass = allPass && e["pass"].get<bool>();
    list.push_back(std::move(e));
  }
  if (want("square-independent")) {
    matched = true;
    FiniteMeasure mu = cones::ppcf::eval_program(
        programs::source("square-independent"), programs::unit_grid());
    double mean = measure_mean(mu);
    Json e;
    e["name"] = "square-independent";
    e["mean"] = mean;
    e["reference"] = 0.25;
    e["total_mass"] = mu.total();
    e["pass"] = std::abs(mean - 0.25) <= 2.0 / 512;
    allPass = allPass && e["pass"].get<bool>();
    list.push_back(std::move(e));
  }
  if (want("geometric")) {
    matched = true;
    cones::ppcf::GeometricResult g = cones::ppcf::run_geometric(64);
    double maxDiff = 0.0;
    for (int k = 0; k < 20; ++k) {
      bool clamped = false;
      int bin = g.measure.space().bin_of(double(k), clamped);
      maxDiff = std::max(
          maxDiff, std::abs(g.measure.mass(bin) - std::ldexp(1.0, -(k + 1))));
    }
    double conservation = std::abs(g.measure.total() + g.residual - 1.0);
    Json e;
    e["name"] = "geometric";
    e["max_mass_diff"] = maxDiff;
    e["mass_plus_residual_minus_1"] = conservation;
    e["iterations"] = g.iterations;
    e["converged"] = g.converged;
    e["pass"] = maxDiff <= 1e-12 && conservation <= 1e-12;
    allPass = allPass && e["pass"].get<bool>();
    list.push_back(std::move(e));
  }
  if (want("boxmuller")) {
    matched = true;
    FiniteMeasure mu = cones::ppcf::eval_program(programs::source("boxmuller"),
                                                 programs::wide_grid());
    BoxmullerTv tv = boxmuller_tv(mu);
    Json e;
    e["name"] = "boxmuller";
    e["total_mass"] = mu.total();
    e["lost_mass"] = mu.lost();
    e["mean"] = measure_mean(mu);
    e["tv_from_normal"] = tv.system;
    e["tv_direct_bins"] = tv.direct;
    e["pass"] = tv.system <= 0.02;
    allPass = allPass && e["pass"].get<bool>();
    list.push_back(std::move(e));
  }
  if (want("cantor-coin")) {
    matched = true;
    cones::TreeVector x = cones::TreeVector::coin_flip(8);
    bool ok = cones::is_additive(x) && cones::antichain_norm(x) == 1.0 &&
              cones::tree_max_diff(
                  x, cones::from_measure(cones::to_measure(x), 8)) == 0.0;
    Json e;
    e["name"] = "cantor-coin";
    e["depth"] = 8;
    e["norm"] = cones::antichain_norm(x);
    e["pass"] = ok;
    allPass = allPass && ok;
    list.push_back(std::move(e));
  }
  if (!matched)
    throw structural_error("unknown example: " + only);

  Json report;
  report["command"] = "examples";
  report["outputs"]["examples"] = std::move(list);
  report["outputs"]["all_pass"] = allPass;
  emit_report(report, flags.out);
  return allPass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cones: finite-measure cones, coherence spaces, a sampling PCF, "
      "and their worked examples"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* run = app.add_subcommand("run", "evaluate a program file to a measure");
  std::string runFile;
  bool runCsv = false;
  run->add_option("file", runFile,
                  "program path, or a built-in name (see `examples`)")
      ->required();
  run->add_flag("--csv", runCsv, "write the histogram CSV, not the report");
  run->add_option("--grid", flags.gridSpec, "evaluation grid as lo,hi,bins");
  run->add_option("--prune-floor", flags.pruneFloor, "mass floor, default 1e-15");
  run->add_option("--fix-unfold", flags.fixUnfold,
                  "fixpoint unfolding bound, default 64");
  run->add_option("--fix-tol", flags.fixTol,
                  "fixpoint stopping tolerance, default 1e-12");
  run->add_option("--out", flags.out, "write to this file instead of stdout");

  auto* fix = app.add_subcommand(
      "fix", "Kleene fixpoint of a built-in family, with optional trace");
  std::string fixFamily, fixTrace;
  std::vector<double> fixU;
  long fixMaxIter = 100000;
  fix->add_option("family", fixFamily, "halfplus | sqrtfam u | pathological u")
      ->required();
  fix->add_option("u", fixU, "family parameter in [0,1]")->expected(0, 1);
  fix->add_option("--fix-tol", flags.fixTol, "stopping tolerance");
  fix->add_option("--max-iter", fixMaxIter, "iteration cap, default 100000");
  fix->add_option("--trace", fixTrace, "write iteration,norm,delta CSV here");
  fix->add_option("--out", flags.out, "write to this file instead of stdout");

  auto* check = app.add_subcommand("check", "run a named invariant suite");
  std::string checkSuite;
  check->add_option("suite", checkSuite,
                    "measure-axioms | fubini | monotone | polarize | pcs | "
                    "cantor")
      ->required();
  check->add_option("--seed", flags.seed, "suite seed, default 0");
  check->add_option("--jobs", flags.jobs, "worker threads, default 1");
  check->add_option("--out", flags.out, "write to this file instead of stdout");

  auto* cantor = app.add_subcommand(
      "cantor", "tree vectors on the truncated Cantor web");
  int cantorDepth = 3;
  bool cantorCoin = false;
  cantor->add_option("--depth", cantorDepth, "tree depth, default 3")
      ->check(CLI::Range(0, 12));
  cantor->add_flag("--coin", cantorCoin, "use the fair-coin vector");
  cantor->add_option("--seed", flags.seed, "seed for the random vector");
  cantor->add_option("--out", flags.out,
                     "write to this file instead of stdout");

  auto* examples =
      app.add_subcommand("examples", "worked examples vs. closed forms");
  std::string examplesOnly;
  examples->add_option("name", examplesOnly, "run only this example");
  examples->add_option("--out", flags.out,
                       "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (run->parsed())
      code = cmd_run(runFile, runCsv, flags);
    else if (fix->parsed())
      code = cmd_fix(fixFamily, fixU, fixMaxIter, fixTrace, flags);
    else if (check->parsed())
      code = cmd_check(checkSuite, flags);
    else if (cantor->parsed())
      code = cmd_cantor(cantorDepth, cantorCoin, flags);
    else if (examples->parsed())
      code = cmd_examples(examplesOnly, flags);
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "wall time: %.1f ms\n",
               std::chrono::duration<double, std::milli>(t1 - t0).count());
  return code;
}
