// Sanity checks for the reference implementations themselves: hand-sized
// cases and cross-checks between two independent methods. Everything the
// other test files trust is pinned here first.

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

TEST_CASE("oracle matmul on a hand case") {
  auto c = oracle::matmul({{1, 2}, {3, 4}}, {{5, 6}, {7, 8}});
  CHECK(c[0][0] == 19);
  CHECK(c[0][1] == 22);
  CHECK(c[1][0] == 43);
  CHECK(c[1][1] == 50);
}

TEST_CASE("oracle convolution on hand cases") {
  auto c = oracle::convolve({1, 2}, {3, 4}, 3);
  CHECK(c[0] == 3);
  CHECK(c[1] == 10);
  CHECK(c[2] == 8);
  // truncation drops the tail
  auto t = oracle::convolve({1, 1}, {1, 1}, 2);
  CHECK(t[0] == 1);
  CHECK(t[1] == 2);
}

TEST_CASE("simpson is exact on cubics and matches erf on the gaussian") {
  CHECK(oracle::simpson([](double x) { return x * x; }, 0, 1, 2) ==
        doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(oracle::simpson([](double x) { return x * x * x; }, 0, 2, 2) ==
        doctest::Approx(4.0).epsilon(1e-15));

  double viaSimpson = oracle::simpson(oracle::gauss_density, -6, 6, 4096);
  double viaErf = oracle::gauss_cdf(6) - oracle::gauss_cdf(-6);
  CHECK(std::abs(viaSimpson - viaErf) < 1e-13);

  auto bins = oracle::gauss_bins(-6, 6, 1200);
  double total = 0.0;
  for (double b : bins) total += b;
  CHECK(std::abs(total - viaErf) < 1e-12);
  // spot-check one interior bin against the cdf difference
  double lo = -6 + 600 * 0.01;
  CHECK(std::abs(bins[600] -
                 (oracle::gauss_cdf(lo + 0.01) - oracle::gauss_cdf(lo))) <
        1e-15);
}

TEST_CASE("antichain enumeration counts and weights") {
  CHECK(oracle::antichains(0).size() == 2);   // {}, {root}
  CHECK(oracle::antichains(1).size() == 5);
  CHECK(oracle::antichains(2).size() == 26);
  CHECK(oracle::antichains(3).size() == 677);  // N(d) = N(d-1)^2 + 1

  // hand vector at depth 1: root worth 1, leaves worth 0.8 + 0.4
  std::map<std::string, double> v{{"", 1.0}, {"0", 0.8}, {"1", 0.4}};
  CHECK(oracle::best_antichain_weight(v, 1) == doctest::Approx(1.2));
  v["1"] = 0.1;
  CHECK(oracle::best_antichain_weight(v, 1) == doctest::Approx(1.0));
}

TEST_CASE("prefix comparability") {
  CHECK(oracle::prefix_comparable("0", "01"));
  CHECK(oracle::prefix_comparable("01", "0"));
  CHECK(oracle::prefix_comparable("", "110"));
  CHECK(!oracle::prefix_comparable("01", "10"));
  CHECK(!oracle::prefix_comparable("00", "01"));
}

TEST_CASE("symmetrized evaluation on hand forms") {
  // diagonal x0*x1 in two variables: F((1,0),(0,1)) = 1/2
  std::map<std::vector<int>, double> diag{{{0, 1}, 1.0}};
  CHECK(oracle::symmetrized_eval(diag, {{1, 0}, {0, 1}}) ==
        doctest::Approx(0.5));
  CHECK(oracle::symmetrized_eval(diag, {{1, 1}, {1, 1}}) ==
        doctest::Approx(1.0));
  // diagonal x^2 in one variable: F(a, b) = ab
  std::map<std::vector<int>, double> sq{{{0, 0}, 1.0}};
  CHECK(oracle::symmetrized_eval(sq, {{3}, {5}}) == doctest::Approx(15.0));
}

TEST_CASE("polynomial composition on hand cases") {
  // g(y) = y^2, f(x) = 1 + x: (1+x)^2 = 1 + 2x + x^2
  auto c = oracle::poly_compose({{2, 1.0}}, {{0, 1.0}, {1, 1.0}}, 4);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(2.0));
  CHECK(c[2] == doctest::Approx(1.0));
  // g(y) = 2 + y, f(x) = 3x^2: 2 + 3x^2
  auto d = oracle::poly_compose({{0, 2.0}, {1, 1.0}}, {{2, 3.0}}, 4);
  CHECK(d[0] == doctest::Approx(2.0));
  CHECK(d[2] == doctest::Approx(3.0));
}

TEST_CASE("formal convolution powers expand with multinomial weights") {
  // (u*u)_2 = 2 u0 u2 + u1^2 on a web of size 3
  oracle::NatSeries u = oracle::nat_var(3);
  oracle::NatSeries uu = oracle::nat_convolve(u, u);
  CHECK(uu.comp[2][{0, 2}] == doctest::Approx(2.0));
  CHECK(uu.comp[2][{1, 1}] == doctest::Approx(1.0));
  CHECK(uu.comp[0][{0, 0}] == doctest::Approx(1.0));

  // a = (0, 1): the series is u itself
  oracle::NatSeries s = oracle::nat_series({0.0, 1.0}, 3);
  CHECK(s.comp[1][{1}] == doctest::Approx(1.0));
  CHECK(s.comp[2][{2}] == doctest::Approx(1.0));
  CHECK(s.comp[0].count({0}) == 1);

  // the coefficient of u^m in (sum a_n u^n)_b is (|m|!/m!) a_{|m|} [sum m = b]
  oracle::NatSeries cube = oracle::nat_series({0.0, 0.0, 0.0, 5.0}, 4);
  CHECK(cube.comp[3][{0, 1, 2}] == doctest::Approx(5.0 * 6.0));  // 3!/1!1!1!
  CHECK(cube.comp[3][{1, 1, 1}] == doctest::Approx(5.0 * 1.0));  // 3!/3!
  CHECK(cube.comp[2][{0, 0, 2}] == doctest::Approx(5.0 * 3.0));  // 3!/2!1!
}

TEST_CASE("geometric closed form") {
  CHECK(oracle::geometric_mass(0) == 0.5);
  CHECK(oracle::geometric_mass(3) == 0.0625);
  CHECK(oracle::geometric_mass(19) == std::ldexp(1.0, -20));
}
