#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "cones/series.hpp"

using namespace cones;

namespace {

AnalyticSeries random_homogeneous(RngStream& rng, int dim, int degree) {
  std::map<Multiset, double> coeffs;
  for (const Multiset& m : enumerate_multisets_exact(dim, degree))
    if (rng.uniform() < 0.8) coeffs[m] = rng.uniform(0.0, 2.0);
  if (coeffs.empty())
    coeffs[enumerate_multisets_exact(dim, degree).front()] = 1.0;
  return AnalyticSeries(dim, degree, coeffs);
}

std::vector<double> random_point(RngStream& rng, int dim, double hi = 1.0) {
  std::vector<double> x(dim);
  for (double& v : x) v = rng.uniform(0.0, hi);
  return x;
}

// Diagonal coefficients a_m of a symmetric form: a_m = c_m * (n!/m!).
std::map<std::vector<int>, double> diag_coeffs(const SymCoeffs& f) {
  std::map<std::vector<int>, double> out;
  for (const auto& [m, c] : f.coeffs())
    out[m] = c * factorial(f.arity()) / ms_factorial(m);
  return out;
}

}  // namespace

TEST_CASE("series evaluation against hand values") {
  // f(x, y) = 1 + 2x + 3xy + y^2
  AnalyticSeries f(2, 2,
                   {{{}, 1.0}, {{0}, 2.0}, {{0, 1}, 3.0}, {{1, 1}, 1.0}});
  CHECK(f.eval({0.0, 0.0}) == 1.0);
  CHECK(f.eval({1.0, 1.0}) == 7.0);
  CHECK(f.eval({0.5, 0.25}) ==
        doctest::Approx(1.0 + 1.0 + 3 * 0.125 + 0.0625).epsilon(1e-15));
  CHECK(!f.is_homogeneous());

  AnalyticSeries g(1, 3, {{{0, 0, 0}, 2.0}});
  int deg = -1;
  CHECK(g.is_homogeneous(&deg));
  CHECK(deg == 3);
  CHECK(g.eval1(0.5) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(AnalyticSeries(2, 1, {{{0, 0}, 1.0}}), structural_error);
  CHECK_THROWS_AS(AnalyticSeries(1, 2, {{{3}, 1.0}}), structural_error);
  CHECK_THROWS_AS(AnalyticSeries(1, 2, {{{0}, -1.0}}), structural_error);
}

TEST_CASE("series algebra matches pointwise arithmetic") {
  RngStream rng(201);
  for (int rep = 0; rep < 30; ++rep) {
    int dim = 1 + rng.below(3);
    AnalyticSeries a = random_homogeneous(rng, dim, 1 + rng.below(2));
    AnalyticSeries b = random_homogeneous(rng, dim, 1 + rng.below(2));
    AnalyticSeries sum = series_add(a, b);
    AnalyticSeries prod = series_mul(a, b, a.max_degree() + b.max_degree());
    AnalyticSeries half = series_scale(a, 0.5);
    for (int k = 0; k < 5; ++k) {
      std::vector<double> x = random_point(rng, dim);
      CHECK(sum.eval(x) ==
            doctest::Approx(a.eval(x) + b.eval(x)).epsilon(1e-12));
      CHECK(prod.eval(x) ==
            doctest::Approx(a.eval(x) * b.eval(x)).epsilon(1e-12));
      CHECK(half.eval(x) == doctest::Approx(0.5 * a.eval(x)).epsilon(1e-15));
    }
  }
}

TEST_CASE("symmetric form evaluation equals the permutation sum") {
  RngStream rng(202);
  for (int rep = 0; rep < 40; ++rep) {
    int n = 1 + rng.below(4);
    int dim = 1 + rng.below(3);
    std::map<Multiset, double> coeffs;
    for (const Multiset& m : enumerate_multisets_exact(dim, n))
      coeffs[m] = rng.uniform(0.0, 1.0);
    SymCoeffs form(n, dim, coeffs);

    std::vector<std::vector<double>> args;
    for (int i = 0; i < n; ++i) args.push_back(random_point(rng, dim));
    double got = form.eval(args);
    double want = oracle::symmetrized_eval(diag_coeffs(form), args);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("polarization: diagonal and round trip") {
  RngStream rng(203);
  for (int rep = 0; rep < 100; ++rep) {
    int n = 1 + rng.below(4);
    int dim = 1 + rng.below(3);
    AnalyticSeries f = random_homogeneous(rng, dim, n);
    SymCoeffs form = polarize(f);
    CHECK(form.arity() == n);

    // The diagonal of the polar form is f again, coefficient by coefficient.
    AnalyticSeries back = form.diagonal();
    CHECK(series_max_coeff_diff(back, f) <= 1e-10);

    // And pointwise on the diagonal.
    for (int k = 0; k < 4; ++k) {
      std::vector<double> x = random_point(rng, dim);
      std::vector<std::vector<double>> diag(n, x);
      CHECK(form.eval(diag) == doctest::Approx(f.eval(x)).epsilon(1e-10));
    }

    // The form agrees with the independent permutation-sum evaluation.
    std::vector<std::vector<double>> args;
    for (int i = 0; i < n; ++i) args.push_back(random_point(rng, dim));
    CHECK(form.eval(args) ==
          doctest::Approx(oracle::symmetrized_eval(diag_coeffs(form), args))
              .epsilon(1e-10));
  }

  SUBCASE("rejects non-homogeneous input") {
    AnalyticSeries mixed(1, 2, {{{0}, 1.0}, {{0, 0}, 1.0}});
    CHECK_THROWS_AS(polarize(mixed), structural_error);
  }

  SUBCASE("hand case: the polar form of x*y") {
    AnalyticSeries f(2, 2, {{{0, 1}, 1.0}});
    SymCoeffs form = polarize(f);
    // B((a1,b1),(a2,b2)) = (a1 b2 + a2 b1) / 2.
    CHECK(form.eval({{1.0, 0.0}, {0.0, 1.0}}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(form.eval({{2.0, 3.0}, {5.0, 7.0}}) ==
          doctest::Approx((2 * 7 + 5 * 3) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("polar form norm inflation stays under n^n/n!") {
  RngStream rng(204);
  for (int rep = 0; rep < 60; ++rep) {
    int n = 1 + rng.below(4);
    int dim = 1 + rng.below(3);
    AnalyticSeries f = random_homogeneous(rng, dim, n);
    SymCoeffs form = polarize(f);

    // On the unit cube both sups sit at the all-ones point, so the bound
    // can be checked without search: every coefficient is nonnegative.
    std::vector<double> ones(dim, 1.0);
    double fSup = f.eval(ones);
    std::vector<std::vector<double>> onesArgs(n, ones);
    double formSup = form.eval(onesArgs);
    double bound = std::pow(double(n), n) / factorial(n);
    CHECK(formSup <= fSup * bound * (1.0 + 1e-12) + 1e-12);

    // Random argument tuples in the cube cannot beat the all-ones value.
    for (int k = 0; k < 5; ++k) {
      std::vector<std::vector<double>> args;
      for (int i = 0; i < n; ++i) args.push_back(random_point(rng, dim));
      CHECK(form.eval(args) <= formSup + 1e-12);
    }
  }
}

TEST_CASE("taylor grading splits a series into homogeneous parts") {
  RngStream rng(205);
  for (int rep = 0; rep < 25; ++rep) {
    int dim = 1 + rng.below(3);
    int maxDeg = 1 + rng.below(4);
    std::map<Multiset, double> coeffs;
    for (const Multiset& m : enumerate_multisets(dim, maxDeg))
      if (rng.uniform() < 0.6) coeffs[m] = rng.uniform(0.0, 1.0);
    AnalyticSeries f(dim, maxDeg, coeffs);

    std::vector<AnalyticSeries> grades = taylor_grade(f);
    CHECK(int(grades.size()) == maxDeg + 1);
    AnalyticSeries sum = AnalyticSeries::zero(dim, maxDeg);
    for (int d = 0; d <= maxDeg; ++d) {
      int deg = -1;
      CHECK(grades[d].is_homogeneous(&deg));
      if (!grades[d].coeffs().empty()) CHECK(deg == d);
      sum = series_add(sum, grades[d]);
    }
    CHECK(series_max_coeff_diff(sum, f) == 0.0);
  }
}

TEST_CASE("local shift recentres a series") {
  RngStream rng(206);
  for (int rep = 0; rep < 30; ++rep) {
    int dim = 1 + rng.below(3);
    int maxDeg = 1 + rng.below(3);
    std::map<Multiset, double> coeffs;
    for (const Multiset& m : enumerate_multisets(dim, maxDeg))
      if (rng.uniform() < 0.7) coeffs[m] = rng.uniform(0.0, 1.0);
    AnalyticSeries f(dim, maxDeg, coeffs);
    std::vector<double> x0 = random_point(rng, dim, 0.5);
    AnalyticSeries g = local_shift(f, x0);

    // g(u) = f(x0 + u), checked pointwise.
    for (int k = 0; k < 5; ++k) {
      std::vector<double> u = random_point(rng, dim, 0.4);
      std::vector<double> xu(dim);
      for (int i = 0; i < dim; ++i) xu[i] = x0[i] + u[i];
      CHECK(g.eval(u) == doctest::Approx(f.eval(xu)).epsilon(1e-12));
    }
    CHECK(g.eval(std::vector<double>(dim, 0.0)) ==
          doctest::Approx(f.eval(x0)).epsilon(1e-12));
  }

  SUBCASE("degree-1 coefficients are the gradient") {
    RngStream rng2(207);
    for (int rep = 0; rep < 20; ++rep) {
      int dim = 1 + rng2.below(3);
      AnalyticSeries f = random_homogeneous(rng2, dim, 2 + rng2.below(2));
      std::vector<double> x0 = random_point(rng2, dim, 0.5);
      AnalyticSeries g = local_shift(f, x0);
      const double h = 1e-5;
      for (int i = 0; i < dim; ++i) {
        std::vector<double> xp = x0, xm = x0;
        xp[i] += h;
        xm[i] -= h;
        double fd = (f.eval(xp) - f.eval(xm)) / (2 * h);
        CHECK(g.coeff({i}) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("composition of univariate series") {
  // g(t) = t^2, f(x) = 0.25 + 0.5x => g(f(x)) = 1/16 + x/4 + x^2/4.
  // (The inner series must keep the unit ball inside g's domain.)
  AnalyticSeries g(1, 2, {{{0, 0}, 1.0}});
  AnalyticSeries f(1, 1, {{{}, 0.25}, {{0}, 0.5}});
  AnalyticSeries comp = compose_series(g, f, 2);
  CHECK(comp.coeff({}) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(comp.coeff({0}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(comp.coeff({0, 0}) == doctest::Approx(0.25).epsilon(1e-12));

  // A ball-escaping inner series is refused up front.
  AnalyticSeries big(1, 1, {{{}, 1.0}, {{0}, 1.0}});
  CHECK_THROWS_AS(compose_series(g, big, 2), structural_error);

  SUBCASE("matches the coefficient-level oracle") {
    RngStream rng(208);
    for (int rep = 0; rep < 40; ++rep) {
      int dg = 1 + rng.below(3), df = 1 + rng.below(3);
      std::map<int, double> gperf, fperf;
      std::map<Multiset, double> gc, fc;
      for (int i = 0; i <= dg; ++i)
        if (rng.uniform() < 0.8) {
          double v = rng.uniform(0.0, 1.0);
          gperf[i] = v;
          gc[Multiset(i, 0)] = v;
        }
      double fTotal = 0.0;
      for (int i = 0; i <= df; ++i)
        if (rng.uniform() < 0.8) {
          double v = rng.uniform(0.0, 0.6);
          fperf[i] = v;
          fTotal += v;
        }
      // Keep f's sup over [0,1] under 1 so the composition is defined.
      for (auto& [i, v] : fperf) {
        if (fTotal > 0.9) v *= 0.9 / fTotal;
        fc[Multiset(i, 0)] = v;
      }
      if (gc.empty()) { gperf[1] = 1.0; gc[{0}] = 1.0; }
      if (fc.empty()) { fperf[1] = 0.5; fc[{0}] = 0.5; }
      int outDeg = dg * df;
      AnalyticSeries gs(1, dg, gc), fs(1, df, fc);
      AnalyticSeries comp2 = compose_series(gs, fs, outDeg);
      std::map<int, double> want = oracle::poly_compose(gperf, fperf, outDeg);
      for (int d = 0; d <= outDeg; ++d) {
        double w = want.count(d) ? want[d] : 0.0;
        CHECK(comp2.coeff(Multiset(d, 0)) ==
              doctest::Approx(w).epsilon(1e-10));
      }
      // Pointwise sanity away from the truncation region.
      double x = rng.uniform(0.0, 0.3);
      double fx = fs.eval1(x);
      if (outDeg >= dg * df)
        CHECK(comp2.eval1(x) == doctest::Approx(gs.eval1(fx)).epsilon(1e-9));
    }
  }
}

TEST_CASE("truncation keeps low-order coefficients") {
  AnalyticSeries f(1, 3, {{{}, 1.0}, {{0}, 2.0}, {{0, 0}, 3.0}, {{0, 0, 0}, 4.0}});
  AnalyticSeries t = f.truncated(1);
  CHECK(t.max_degree() == 1);
  CHECK(t.coeff({}) == 1.0);
  CHECK(t.coeff({0}) == 2.0);
  CHECK(t.coeffs().size() == 2);
}
