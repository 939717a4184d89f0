// Python bindings for the cones workbench. The surface mirrors the C++
// operation set; coefficient maps keyed by multisets cross the boundary
// as (multiset, value) pair lists because Python lists cannot key dicts.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "cones/ball.hpp"
#include "cones/cantor.hpp"
#include "cones/fixpoint.hpp"
#include "cones/measure.hpp"
#include "cones/pcs.hpp"
#include "cones/ppcf.hpp"
#include "cones/programs.hpp"
#include "cones/series.hpp"
#include "cones/suites.hpp"
#include "cones/totmon.hpp"

namespace py = pybind11;
using namespace cones;

namespace {

using CoeffPairs = std::vector<std::pair<Multiset, double>>;

std::map<Multiset, double> to_map(const CoeffPairs& pairs) {
  std::map<Multiset, double> out;
  for (const auto& [m, v] : pairs) out[m] = v;
  return out;
}

CoeffPairs to_pairs(const std::map<Multiset, double>& m) {
  return CoeffPairs(m.begin(), m.end());
}

}  // namespace

PYBIND11_MODULE(_cones, m) {
  m.doc() = "finite-measure cones, coherence spaces, and the small "
            "probabilistic language";

  py::register_exception<contract_error>(m, "ContractError",
                                         PyExc_RuntimeError);
  auto structural =
      py::register_exception<structural_error>(m, "StructuralError",
                                               PyExc_ValueError);
  py::register_exception<order_error>(m, "OrderError", structural);
  py::register_exception<ppcf::parse_error>(m, "ParseError", structural);
  py::register_exception<ppcf::type_error>(m, "TypeError", structural);

  // ---- spaces and measures ------------------------------------------

  py::class_<Space>(m, "Space")
      .def_static("grid", &Space::grid, py::arg("lo"), py::arg("hi"),
                  py::arg("bins"))
      .def_static("discrete", &Space::discrete, py::arg("labels"))
      .def("size", &Space::size)
      .def("is_grid",
           [](const Space& s) { return s.kind() == Space::Kind::grid; })
      .def("lo", &Space::lo)
      .def("hi", &Space::hi)
      .def("width", &Space::width)
      .def("center", &Space::center, py::arg("point"))
      .def("labels", &Space::labels)
      .def("point_name", &Space::point_name, py::arg("point"))
      .def("numeric", &Space::numeric, py::arg("point"))
      .def("bin_of",
           [](const Space& s, double r) {
             bool clamped = false;
             int b = s.bin_of(r, clamped);
             return py::make_tuple(b, clamped);
           },
           py::arg("r"), "Returns (bin, clamped).")
      .def("__eq__",
           [](const Space& a, const Space& b) { return a == b; })
      .def("__repr__", &Space::describe);

  py::class_<FiniteMeasure>(m, "FiniteMeasure")
      .def(py::init<const Space&>(), py::arg("space"))
      .def_static("zero", &FiniteMeasure::zero, py::arg("space"))
      .def_static("dirac", &FiniteMeasure::dirac, py::arg("space"),
                  py::arg("point"))
      .def_static("dirac_real", &FiniteMeasure::dirac_real, py::arg("grid"),
                  py::arg("r"))
      .def_static("from_masses", &FiniteMeasure::from_masses, py::arg("space"),
                  py::arg("masses"))
      .def("space", &FiniteMeasure::space)
      .def("atoms", &FiniteMeasure::atoms)
      .def("mass", &FiniteMeasure::mass, py::arg("point"))
      .def("total", &FiniteMeasure::total)
      .def("norm", &FiniteMeasure::norm)
      .def("is_zero", &FiniteMeasure::is_zero)
      .def("lost", &FiniteMeasure::lost)
      .def("clamped", &FiniteMeasure::clamped)
      .def("accumulate", &FiniteMeasure::accumulate, py::arg("point"),
           py::arg("mass"))
      .def("prune", &FiniteMeasure::prune)
      .def("__repr__", [](const FiniteMeasure& mu) {
        return "FiniteMeasure(total=" + std::to_string(mu.total()) + ", " +
               std::to_string(mu.atoms().size()) + " atoms)";
      });

  m.def("add", &add, py::arg("a"), py::arg("b"));
  m.def("scale", &scale, py::arg("lam"), py::arg("a"));
  m.def("leq", &leq, py::arg("a"), py::arg("b"), py::arg("tol") = 0.0);
  m.def("sub", &sub, py::arg("a"), py::arg("b"));
  m.def("max_pointwise_diff", &max_pointwise_diff, py::arg("a"), py::arg("b"));
  m.def("pushforward_real", &pushforward_real, py::arg("phi"), py::arg("mu"),
        py::arg("target"),
        "Push mu through a partial map (return None where undefined).");
  m.def("product_measure", &product_measure, py::arg("mu"), py::arg("nu"));
  m.def("binop_pushforward", &binop_pushforward, py::arg("op"), py::arg("a"),
        py::arg("b"), py::arg("target"));
  m.def("prune_floor", &prune_floor);
  m.def("set_prune_floor", &set_prune_floor, py::arg("floor"));

  py::class_<Kernel>(m, "Kernel")
      .def_static("dirac", &Kernel::dirac, py::arg("space"))
      .def_static("from_matrix", &Kernel::from_matrix, py::arg("source"),
                  py::arg("target"), py::arg("rows"))
      .def("source", &Kernel::source)
      .def("target", &Kernel::target)
      .def("row", &Kernel::row, py::arg("i"))
      .def("substochastic", &Kernel::substochastic, py::arg("tol") = 1e-12);
  m.def("kernel_apply", &kernel_apply, py::arg("kernel"), py::arg("mu"));
  m.def("kernel_compose", &kernel_compose, py::arg("k2"), py::arg("k1"),
        "Diagrammatic order: first k1, then k2.");

  // Path integration over a discrete space of a real-valued path.
  m.def("integrate",
        [](const std::vector<double>& values, const FiniteMeasure& mu) {
          return integrate_path(Path<double>(mu.space(), values), mu);
        },
        py::arg("values"), py::arg("mu"),
        "Integral of a dense path (one value per point) against mu.");

  // ---- balls, series, polarization ----------------------------------

  py::class_<Ball>(m, "Ball")
      .def_static("cube", &Ball::cube, py::arg("dim"))
      .def_static("simplex", &Ball::simplex, py::arg("dim"))
      .def("dim", &Ball::dim)
      .def("contains", &Ball::contains, py::arg("x"), py::arg("tol") = 0.0)
      .def("gauge", &Ball::gauge, py::arg("x"));

  py::class_<AnalyticSeries>(m, "AnalyticSeries")
      .def(py::init([](int dim, int maxDegree, const CoeffPairs& coeffs) {
             return AnalyticSeries(dim, maxDegree, to_map(coeffs));
           }),
           py::arg("dim"), py::arg("max_degree"), py::arg("coeffs"))
      .def("dim", &AnalyticSeries::dim)
      .def("max_degree", &AnalyticSeries::max_degree)
      .def("coeffs",
           [](const AnalyticSeries& f) { return to_pairs(f.coeffs()); })
      .def("coeff", &AnalyticSeries::coeff, py::arg("m"))
      .def("eval", &AnalyticSeries::eval, py::arg("x"))
      .def("eval1", &AnalyticSeries::eval1, py::arg("x"))
      .def("is_homogeneous",
           [](const AnalyticSeries& f) {
             int degree = 0;
             bool ok = f.is_homogeneous(&degree);
             return py::make_tuple(ok, degree);
           })
      .def("truncated", &AnalyticSeries::truncated, py::arg("max_degree"));

  m.def("series_add", &series_add);
  m.def("series_scale", &series_scale);
  m.def("series_mul", &series_mul, py::arg("a"), py::arg("b"),
        py::arg("max_degree"));
  m.def("series_max_coeff_diff", &series_max_coeff_diff);
  m.def("taylor_grade", &taylor_grade, py::arg("f"));
  m.def("local_shift",
        [](const AnalyticSeries& f, const std::vector<double>& x0) {
          return local_shift(f, x0);
        },
        py::arg("f"), py::arg("x0"));
  m.def("compose_series",
        [](const AnalyticSeries& g, const AnalyticSeries& f, int outDegree) {
          return compose_series(g, f, outDegree);
        },
        py::arg("g"), py::arg("f"), py::arg("out_degree"));

  py::class_<SymCoeffs>(m, "SymCoeffs")
      .def(py::init([](int arity, int dim, const CoeffPairs& coeffs) {
             return SymCoeffs(arity, dim, to_map(coeffs));
           }),
           py::arg("arity"), py::arg("dim"), py::arg("coeffs"))
      .def("arity", &SymCoeffs::arity)
      .def("dim", &SymCoeffs::dim)
      .def("coeffs", [](const SymCoeffs& c) { return to_pairs(c.coeffs()); })
      .def("eval", &SymCoeffs::eval, py::arg("args"))
      .def("diagonal", &SymCoeffs::diagonal);
  m.def("polarize", &polarize, py::arg("f"));

  // ---- total monotonicity -------------------------------------------

  m.def("fdiff",
        [](const RealFn& f, const std::vector<std::vector<double>>& us,
           const std::vector<double>& x) {
          FdiffResult r = fdiff(f, us, x);
          return py::make_tuple(r.plus, r.minus, r.delta());
        },
        py::arg("f"), py::arg("us"), py::arg("x"),
        "Iterated difference against the unit cube; returns (plus, minus, "
        "delta).");

  py::class_<TotMonWitness>(m, "TotMonWitness")
      .def_readonly("order", &TotMonWitness::order)
      .def_readonly("sample", &TotMonWitness::sample)
      .def_readonly("x", &TotMonWitness::x)
      .def_readonly("us", &TotMonWitness::us)
      .def_readonly("plus", &TotMonWitness::plus)
      .def_readonly("minus", &TotMonWitness::minus)
      .def("describe", &TotMonWitness::describe);
  py::class_<TotMonReport>(m, "TotMonReport")
      .def_readonly("ok", &TotMonReport::pass)
      .def_readonly("orders_checked", &TotMonReport::ordersChecked)
      .def_readonly("samples_per_order", &TotMonReport::samplesPerOrder)
      .def_readonly("witness", &TotMonReport::witness)
      .def("__bool__", [](const TotMonReport& r) { return r.pass; });
  m.def("check_total_monotone", &check_total_monotone, py::arg("f"),
        py::arg("ball"), py::arg("max_order"), py::arg("samples"),
        py::arg("seed"), py::arg("tol") = 1e-10);

  // ---- fixpoints -----------------------------------------------------

  py::class_<FixpointResult>(m, "FixpointResult")
      .def_readonly("value", &FixpointResult::value)
      .def_readonly("iterations", &FixpointResult::iterations)
      .def_readonly("converged", &FixpointResult::converged)
      .def_property_readonly("trace", [](const FixpointResult& r) {
        std::vector<std::tuple<long, double, double>> rows;
        for (const auto& t : r.trace)
          rows.emplace_back(t.iteration, t.norm, t.delta);
        return rows;
      });
  m.def("kleene_fixpoint",
        [](const std::function<std::vector<double>(
               const std::vector<double>&)>& f,
           const Ball& ball, double tol, long maxIter) {
          return kleene_fixpoint(f, ball, tol, maxIter);
        },
        py::arg("f"), py::arg("ball"), py::arg("tol") = 1e-12,
        py::arg("max_iter") = 1000000);
  m.def("kleene_fixpoint1",
        [](const std::function<double(double)>& f, double tol, long maxIter) {
          return kleene_fixpoint1(f, tol, maxIter);
        },
        py::arg("f"), py::arg("tol") = 1e-12, py::arg("max_iter") = 1000000);

  // ---- coherence spaces ---------------------------------------------

  py::class_<Pcs>(m, "Pcs")
      .def_static("one", &Pcs::one)
      .def_static("bot", &Pcs::bot)
      .def_static("snat", &Pcs::snat, py::arg("k"))
      .def_static("orth_snat", &Pcs::orth_snat, py::arg("k"))
      .def_static("boolean", &Pcs::boolean)
      .def_static("with_", &Pcs::with, py::arg("x"), py::arg("y"))
      .def_static("plus", &Pcs::plus, py::arg("x"), py::arg("y"))
      .def_static("tensor", &Pcs::tensor, py::arg("x"), py::arg("y"))
      .def_static("limpl", &Pcs::limpl, py::arg("x"), py::arg("y"))
      .def_static("orth", &Pcs::orth, py::arg("x"))
      .def_static("bang", &Pcs::bang, py::arg("x"), py::arg("degree") = 6,
                  py::arg("extra_promotions") = 0, py::arg("seed") = 0)
      .def("web_size", &Pcs::web_size)
      .def("tests", &Pcs::tests)
      .def("gens", &Pcs::gens)
      .def("exact", &Pcs::exact)
      .def("bang_multisets", &Pcs::bang_multisets)
      .def("describe", &Pcs::describe)
      .def("__repr__", &Pcs::describe);

  py::class_<PcsVector>(m, "PcsVector")
      .def(py::init<Pcs, std::vector<double>>(), py::arg("pcs"),
           py::arg("coeffs"))
      .def_static("zero", &PcsVector::zero)
      .def_static("basis", &PcsVector::basis, py::arg("pcs"), py::arg("atom"))
      .def("pcs", &PcsVector::pcs)
      .def("coeffs", &PcsVector::coeffs);

  py::class_<NormResult>(m, "NormResult")
      .def_readonly("lower", &NormResult::lower)
      .def_readonly("upper", &NormResult::upper)
      .def_readonly("exact", &NormResult::exact)
      .def("__repr__", [](const NormResult& r) {
        return "NormResult(lower=" + std::to_string(r.lower) +
               ", upper=" + std::to_string(r.upper) +
               ", exact=" + (r.exact ? std::string("True") : "False") + ")";
      });
  m.def("norm", &norm, py::arg("x"));
  m.def("membership", &membership, py::arg("x"), py::arg("tol") = 1e-9);
  m.def("vec_add", &vec_add);
  m.def("vec_scale", &vec_scale);

  py::class_<PcsMatrix>(m, "PcsMatrix")
      .def(py::init<Pcs, Pcs, std::vector<std::vector<double>>>(),
           py::arg("source"), py::arg("target"), py::arg("entries"))
      .def_static("identity", &PcsMatrix::identity)
      .def_static("zero", &PcsMatrix::zero)
      .def("source", &PcsMatrix::source)
      .def("target", &PcsMatrix::target)
      .def("entry", &PcsMatrix::entry, py::arg("a"), py::arg("b"))
      .def("entries", &PcsMatrix::entries);
  m.def("mat_apply", &mat_apply);
  m.def("mat_compose", &mat_compose, py::arg("t2"), py::arg("t1"));
  m.def("is_morphism", &is_morphism, py::arg("t"), py::arg("tol") = 1e-9);
  m.def("mat_norm_estimate", &mat_norm_estimate);
  m.def("promote", &promote, py::arg("x"), py::arg("degree"));
  m.def("power_series_apply", &power_series_apply, py::arg("t"), py::arg("x"));
  m.def("nat_convolve", &nat_convolve, py::arg("a"), py::arg("b"),
        py::arg("web_size"));
  m.def("convolution_series_matrix", &convolution_series_matrix,
        py::arg("web_size"), py::arg("a"), py::arg("degree"),
        py::arg("coeff_index_offset") = 0);

  // ---- the probabilistic language -----------------------------------

  py::class_<ppcf::GridConfig>(m, "GridConfig")
      .def(py::init<>())
      .def_readwrite("lo", &ppcf::GridConfig::lo)
      .def_readwrite("hi", &ppcf::GridConfig::hi)
      .def_readwrite("bins", &ppcf::GridConfig::bins)
      .def_readwrite("prune_floor", &ppcf::GridConfig::pruneFloor)
      .def_readwrite("fix_unfold_bound", &ppcf::GridConfig::fixUnfoldBound)
      .def_readwrite("fix_tol", &ppcf::GridConfig::fixTol)
      .def("space", &ppcf::GridConfig::space);

  py::class_<ppcf::EvalDiag>(m, "EvalDiag")
      .def_readonly("fix_observations", &ppcf::EvalDiag::fixObservations)
      .def_readonly("fix_iterations_max", &ppcf::EvalDiag::fixIterationsMax)
      .def_readonly("fix_converged", &ppcf::EvalDiag::fixConverged)
      .def_readonly("fix_residual", &ppcf::EvalDiag::fixResidual);

  m.def("reprint",
        [](const std::string& text) {
          return ppcf::print_term(ppcf::parse(text));
        },
        py::arg("text"), "Parse a program and print it back normalized.");
  m.def("typecheck",
        [](const std::string& text) {
          return ppcf::print_type(ppcf::typecheck(ppcf::parse(text)));
        },
        py::arg("text"), "Type of a closed program, as a string.");
  m.def("eval_program",
        [](const std::string& text, const ppcf::GridConfig& cfg) {
          return ppcf::eval_program(text, cfg);
        },
        py::arg("text"), py::arg("config"));
  m.def("eval_program_diag",
        [](const std::string& text, const ppcf::GridConfig& cfg) {
          auto diag = std::make_shared<ppcf::EvalDiag>();
          FiniteMeasure mu = ppcf::eval_program(text, cfg, diag);
          return py::make_tuple(mu, *diag);
        },
        py::arg("text"), py::arg("config"),
        "Returns (measure, EvalDiag).");

  py::class_<ppcf::GeometricResult>(m, "GeometricResult")
      .def_readonly("measure", &ppcf::GeometricResult::measure)
      .def_readonly("residual", &ppcf::GeometricResult::residual)
      .def_readonly("iterations", &ppcf::GeometricResult::iterations)
      .def_readonly("converged", &ppcf::GeometricResult::converged);
  m.def("run_geometric", &ppcf::run_geometric,
        py::arg("fix_unfold_bound") = 64);

  m.def("program_names", [] {
    std::vector<std::string> names;
    for (const auto& [name, text] : ppcf::programs::all()) names.push_back(name);
    return names;
  });
  m.def("program_source",
        [](const std::string& name) { return ppcf::programs::source(name); },
        py::arg("name"));
  m.def("wide_grid", &ppcf::programs::wide_grid);
  m.def("unit_grid", &ppcf::programs::unit_grid);
  m.def("integer_grid", &ppcf::programs::integer_grid);
  m.def("default_grid", &ppcf::programs::default_grid, py::arg("name"));

  // ---- the binary tree example --------------------------------------

  py::class_<TreeVector>(m, "TreeVector")
      .def(py::init<int, std::map<std::string, double>>(), py::arg("depth"),
           py::arg("coeffs"))
      .def_static("zero", &TreeVector::zero, py::arg("depth"))
      .def_static("coin_flip", &TreeVector::coin_flip, py::arg("depth"))
      .def("depth", &TreeVector::depth)
      .def("at", &TreeVector::at, py::arg("s"))
      .def("with_entry", &TreeVector::with_entry, py::arg("s"), py::arg("v"))
      .def("coeffs", &TreeVector::coeffs);
  m.def("tree_max_diff", &tree_max_diff);
  m.def("is_additive", &is_additive, py::arg("x"), py::arg("tol") = 1e-12);
  m.def("antichain_norm", &antichain_norm, py::arg("x"));
  m.def("theta_apply", &theta_apply, py::arg("x"));
  m.def("cantor_leaf_space", &cantor_leaf_space, py::arg("depth"));
  m.def("to_measure", &to_measure, py::arg("x"));
  m.def("from_measure", &from_measure, py::arg("mu"), py::arg("depth"));

  // ---- invariant suites ---------------------------------------------

  py::class_<SuiteCase>(m, "SuiteCase")
      .def_readonly("name", &SuiteCase::name)
      .def_readonly("ok", &SuiteCase::pass)
      .def_readonly("detail", &SuiteCase::detail);
  py::class_<SuiteResult>(m, "SuiteResult")
      .def_readonly("suite", &SuiteResult::suite)
      .def_readonly("seed", &SuiteResult::seed)
      .def_readonly("cases", &SuiteResult::cases)
      .def("passed", &SuiteResult::passed)
      .def("failed", &SuiteResult::failed)
      .def("all_pass", &SuiteResult::all_pass);
  m.def("suite_names", &suite_names);
  m.def("run_suite", &run_suite, py::arg("name"), py::arg("seed"),
        py::arg("jobs") = 1);
}
