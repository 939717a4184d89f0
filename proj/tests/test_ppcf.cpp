#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "cones/ppcf.hpp"
#include "cones/programs.hpp"

using namespace cones;
using namespace cones::ppcf;

namespace {

double moment(const FiniteMeasure& mu, int k) {
  double s = 0.0;
  for (const auto& [p, m] : mu.atoms())
    s += m * std::pow(*mu.space().numeric(p), k);
  return s;
}

double mean(const FiniteMeasure& mu) { return moment(mu, 1); }
double variance(const FiniteMeasure& mu) {
  double m1 = moment(mu, 1);
  return moment(mu, 2) - m1 * m1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("parsing builds the expected trees") {
  TermPtr id = parse("lam x: real. x");
  REQUIRE(id->k == Term::K::lam);
  CHECK(id->name == "x");
  CHECK(id->type->is_real());
  CHECK(id->t1->k == Term::K::var);

  TermPtr let = parse("let x = unif in mult(x, x)");
  REQUIRE(let->k == Term::K::letSample);
  CHECK(let->name == "x");
  CHECK(let->t1->k == Term::K::unif);
  REQUIRE(let->t2->k == Term::K::binop);
  CHECK(let->t2->bop == Binop::mult);

  TermPtr ch = parse("choice 0.25 x (f y)");
  REQUIRE(ch->k == Term::K::choice);
  CHECK(ch->value == 0.25);
  CHECK(ch->t1->k == Term::K::var);
  CHECK(ch->t2->k == Term::K::app);

  TermPtr num = parse("-2.5");
  REQUIRE(num->k == Term::K::num);
  CHECK(num->value == -2.5);

  // Application is left associative; choice operands are atoms.
  TermPtr app = parse("f x y");
  REQUIRE(app->k == Term::K::app);
  CHECK(app->t1->k == Term::K::app);

  TermPtr fx = parse("fix (lam f: real => real. f)");
  REQUIRE(fx->k == Term::K::fix);
  CHECK(fx->t1->k == Term::K::lam);
  CHECK(fx->t1->type->is_arrow());
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("mult(x");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 1);
    CHECK(e.col() >= 6);
  }

  try {
    parse("let x = unif in\nplus(x,");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }

  CHECK_THROWS_AS(parse(""), parse_error);
  CHECK_THROWS_AS(parse("lam x real. x"), parse_error);
  CHECK_THROWS_AS(parse("choice 1.5 (0.0) (1.0)"), parse_error);
  CHECK_THROWS_AS(parse("choice x (0.0) (1.0)"), parse_error);
  CHECK_THROWS_AS(parse("(plus(x, y)"), parse_error);
  CHECK_THROWS_AS(parse("1.0 2.0 extra )"), parse_error);
}

TEST_CASE("printing round-trips through the parser") {
  for (const auto& [name, src] : programs::all()) {
    CAPTURE(name);
    TermPtr t = parse(src);
    std::string printed = print_term(t);
    TermPtr back = parse(printed);
    CHECK(print_term(back) == printed);
  }

  // A hand-built term survives as well.
  TermPtr t = mk_let(
      "x", mk_choice(0.5, mk_unif(), mk_num(0.25)),
      mk_binop(Binop::plus, mk_var("x"), mk_unop(Unop::sqrt, mk_var("x"))));
  std::string printed = print_term(t);
  CHECK(print_term(parse(printed)) == printed);
}

TEST_CASE("typechecking accepts and rejects as expected") {
  CHECK(type_equal(typecheck(parse("lam x: real. x")),
                   Type::arrow(Type::real(), Type::real())));
  CHECK(typecheck(parse("let x = unif in mult(x, x)"))->is_real());
  CHECK(type_equal(typecheck(parse("fix (lam f: real => real. f)")),
                   Type::arrow(Type::real(), Type::real())));
  CHECK(typecheck(parse(programs::source("boxmuller")))->is_real());
  CHECK(typecheck(parse(programs::source("geometric")))->is_real());

  // Unbound variables are reported with their position.
  try {
    typecheck(parse("plus(x, 1.0)"));
    FAIL("expected a type error");
  } catch (const type_error& e) {
    CHECK(std::string(e.what()).find("x") != std::string::npos);
    CHECK(std::string(e.what()).find("1:") != std::string::npos);
  }

  CHECK_THROWS_AS(typecheck(parse("(lam x: real. x) (lam y: real. y)")),
                  type_error);
  CHECK_THROWS_AS(typecheck(parse("unif unif")), type_error);
  // Only ground values can be sampled.
  CHECK_THROWS_AS(typecheck(parse("let f = (lam x: real. x) in f 1.0")),
                  type_error);
  // Both branches of a choice must share a type.
  CHECK_THROWS_AS(typecheck(parse("choice 0.5 (1.0) (lam x: real. x)")),
                  type_error);
  // fix needs a map from A to A (any A: ground fixpoints are legal).
  CHECK(typecheck(parse("fix (lam x: real. x)"))->is_real());
  CHECK_THROWS_AS(typecheck(parse("fix (1.0)")), type_error);
  CHECK_THROWS_AS(typecheck(parse("log(lam x: real. x)")), type_error);
}

TEST_CASE("literals and unif evaluate to the expected measures") {
  GridConfig unit = programs::unit_grid();

  FiniteMeasure d = eval_program("0.34", unit);
  REQUIRE(d.atoms().size() == 1);
  CHECK(d.total() == 1.0);
  int p = d.atoms().begin()->first;
  CHECK(std::abs(*d.space().numeric(p) - 0.34) <= unit.space().width() / 2);

  FiniteMeasure u = eval_program("unif", unit);
  CHECK(int(u.atoms().size()) == 512);
  for (const auto& [q, m] : u.atoms()) CHECK(m == 1.0 / 512);
  CHECK(u.total() == 1.0);

  // On the wide grid the unit interval still covers exactly 512 bins.
  FiniteMeasure w = eval_program("unif", programs::wide_grid());
  CHECK(int(w.atoms().size()) == 512);
  for (const auto& [q, m] : w.atoms()) {
    CHECK(m == 1.0 / 512);
    double r = *w.space().numeric(q);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
  }
}

TEST_CASE("sampling let versus independent reuse") {
  GridConfig cfg = programs::wide_grid();

  FiniteMeasure letSq = eval_program(programs::source("square-let"), cfg);
  FiniteMeasure indep =
      eval_program(programs::source("square-independent"), cfg);
  CHECK(letSq.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(indep.total() == doctest::Approx(1.0).epsilon(1e-12));

  // E[x^2] = 1/3 under sharing, E[x]E[y] = 1/4 independently; the grid
  // is allowed two bins of slack.
  CHECK(std::abs(mean(letSq) - 1.0 / 3.0) <= 2.0 / 512);
  CHECK(std::abs(mean(indep) - 1.0 / 4.0) <= 2.0 / 512);

  // The same split shows up in duplication: let doubles the sample
  // (variance 4v), application of a duplicating function draws twice
  // (variance 2v). Both identities are exact on the grid.
  FiniteMeasure u = eval_program("unif", cfg);
  FiniteMeasure app = eval_program("(lam x: real. plus(x, x)) unif", cfg);
  FiniteMeasure let2 = eval_program("let x = unif in plus(x, x)", cfg);
  CHECK(std::abs(variance(app) - 2 * variance(u)) <= 1e-12);
  CHECK(std::abs(variance(let2) - 4 * variance(u)) <= 1e-12);
  CHECK(std::abs(mean(app) - mean(let2)) <= 1e-12);
}

TEST_CASE("let is linear in the sampled distribution") {
  GridConfig cfg = programs::wide_grid();
  FiniteMeasure whole =
      eval_program("let x = choice 0.25 unif 0.75 in mult(x, x)", cfg);
  FiniteMeasure partA = eval_program("let x = unif in mult(x, x)", cfg);
  FiniteMeasure partB = eval_program("let x = 0.75 in mult(x, x)", cfg);
  FiniteMeasure mix = add(scale(0.25, partA), scale(0.75, partB));
  CHECK(max_pointwise_diff(whole, mix) <= 1e-12);
}

TEST_CASE("let substitutes a dirac exactly") {
  GridConfig cfg = programs::wide_grid();
  TermPtr body = parse("plus(mult(x, x), x)");
  FiniteMeasure viaLet = eval_program("let x = 0.3 in plus(mult(x, x), x)", cfg);

  Env env;
  env["x"] = Value::of_measure(FiniteMeasure::dirac_real(cfg.space(), 0.3));
  ValuePtr direct = eval(body, env, cfg);
  REQUIRE(direct->measure.has_value());
  CHECK(max_pointwise_diff(viaLet, *direct->measure) == 0.0);
}

TEST_CASE("let is determined by its values on diracs") {
  GridConfig cfg = programs::wide_grid();
  TermPtr body = parse("plus(mult(x, x), x)");
  FiniteMeasure bound = eval_program("choice 0.25 unif 0.5", cfg);
  FiniteMeasure whole =
      eval_program("let x = (choice 0.25 unif 0.5) in plus(mult(x, x), x)",
                   cfg);

  FiniteMeasure assembled = FiniteMeasure::zero(cfg.space());
  for (const auto& [p, m] : bound.atoms()) {
    Env env;
    env["x"] = Value::of_measure(FiniteMeasure::dirac(cfg.space(), p));
    ValuePtr piece = eval(body, env, cfg);
    REQUIRE(piece->measure.has_value());
    assembled = add(assembled, scale(m, *piece->measure));
  }
  CHECK(max_pointwise_diff(whole, assembled) <= 1e-12);
}

TEST_CASE("partial primitives lose mass, clamping keeps it") {
  GridConfig cfg = programs::wide_grid();

  FiniteMeasure sq = eval_program("sqrt(plus(-0.5, unif))", cfg);
  CHECK(sq.lost() > 0.45);
  CHECK(sq.lost() < 0.55);
  CHECK(sq.total() + sq.lost() == 1.0);

  FiniteMeasure ex = eval_program("exp(mult(4.0, unif))", cfg);
  CHECK(ex.total() == 1.0);
  CHECK(ex.lost() == 0.0);
  CHECK(ex.clamped() > 0.25);

  FiniteMeasure ng = eval_program("neg(1.5)", cfg);
  REQUIRE(ng.atoms().size() == 1);
  CHECK(std::abs(*ng.space().numeric(ng.atoms().begin()->first) + 1.5) <=
        cfg.space().width());

  FiniteMeasure cs = eval_program("cos(0.0)", cfg);
  REQUIRE(cs.atoms().size() == 1);
  CHECK(std::abs(*cs.space().numeric(cs.atoms().begin()->first) - 1.0) <=
        cfg.space().width());
}

TEST_CASE("geometric program unfolds to the dyadic distribution") {
  GeometricResult g = run_geometric();
  CHECK(g.converged);
  CHECK(g.iterations <= 64);
  CHECK(g.measure.total() + g.residual == 1.0);
  for (int k = 0; k < 20; ++k) {
    double want = oracle::geometric_mass(k);
    bool clamped = false;
    int bin = g.measure.space().bin_of(double(k), clamped);
    REQUIRE(!clamped);
    CHECK(g.measure.mass(bin) == want);  // dyadic arithmetic is exact
  }

  SUBCASE("a small unfolding bound reports non-convergence") {
    GeometricResult g4 = run_geometric(4);
    CHECK(!g4.converged);
    CHECK(g4.iterations == 4);
    CHECK(g4.residual == 0.0625);
    CHECK(g4.measure.total() + g4.residual == 1.0);
  }
}

TEST_CASE("ground fixpoint of the identity is the zero measure") {
  GridConfig cfg = programs::unit_grid();
  FiniteMeasure mu = eval_program("fix (lam x: real. x)", cfg);
  CHECK(mu.is_zero());
}

TEST_CASE("evaluation diagnostics surface fixpoint behaviour") {
  auto diag = std::make_shared<EvalDiag>();
  GridConfig cfg = programs::integer_grid();
  FiniteMeasure mu = eval_program(programs::source("geometric"), cfg, diag);
  CHECK(mu.total() > 0.99);
  CHECK(diag->fixObservations >= 1);
  CHECK(diag->fixIterationsMax >= 30);
  CHECK(diag->fixConverged);
  CHECK(diag->fixResidual <= cfg.fixTol);

  auto quiet = std::make_shared<EvalDiag>();
  eval_program(programs::source("square-let"), programs::wide_grid(), quiet);
  CHECK(quiet->fixObservations == 0);
}

TEST_CASE("bottom values and the value module") {
  GridConfig cfg = programs::unit_grid();
  ValuePtr bot = bottom_value(Type::real(), cfg);
  REQUIRE(bot->measure.has_value());
  CHECK(bot->measure->is_zero());

  ValuePtr fbot = bottom_value(Type::arrow(Type::real(), Type::real()), cfg);
  REQUIRE(fbot->fn);
  ValuePtr out = fbot->fn(bot);
  REQUIRE(out->measure.has_value());
  CHECK(out->measure->is_zero());

  ValuePtr a = Value::of_measure(FiniteMeasure::dirac_real(cfg.space(), 0.25));
  ValuePtr b = Value::of_measure(FiniteMeasure::dirac_real(cfg.space(), 0.75));
  ValuePtr mix = value_add(value_scale(a, 0.5), value_scale(b, 0.5));
  REQUIRE(mix->measure.has_value());
  CHECK(mix->measure->total() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mix->measure->atoms().size() == 2);
}

TEST_CASE("embedded sources mirror the program files") {
  for (const auto& [name, src] : programs::all()) {
    CAPTURE(name);
    std::string file = name;
    for (char& c : file)
      if (c == '-') c = '_';
    std::string onDisk =
        slurp(std::string(CONES_SOURCE_DIR) + "/programs/" + file + ".ppcf");
    // Allow a trailing newline difference, nothing else.
    while (!onDisk.empty() && onDisk.back() == '\n') onDisk.pop_back();
    std::string embedded = src;
    while (!embedded.empty() && embedded.back() == '\n') embedded.pop_back();
    CHECK(onDisk == embedded);
  }
  CHECK_THROWS_AS(programs::source("nosuch"), structural_error);
}
