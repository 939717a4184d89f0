#include "cones/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "cones/ball.hpp"
#include "cones/cantor.hpp"
#include "cones/measure.hpp"
#include "cones/pcs.hpp"
#include "cones/series.hpp"
#include "cones/totmon.hpp"

namespace cones {
namespace {

struct CaseSpec {
  std::string name;
  std::function<SuiteCase(RngStream&)> run;
};

SuiteCase ok(std::string detail) { return {"", true, std::move(detail)}; }
SuiteCase bad(std::string detail) { return {"", false, std::move(detail)}; }

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Space rand_space(RngStream& rng, int maxPoints) {
  int n = 1 + rng.below(maxPoints);
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return Space::discrete(labels);
}

FiniteMeasure rand_measure(RngStream& rng, const Space& s) {
  FiniteMeasure mu = FiniteMeasure::zero(s);
  for (int i = 0; i < s.size(); ++i) {
    if (rng.uniform() < 0.25) continue;  // leave holes in the support
    mu.accumulate(i, rng.uniform());
  }
  mu.prune();
  return mu;
}

std::map<Multiset, double> rand_coeffs(RngStream& rng, int dim, int maxDeg,
                                       double amp) {
  std::map<Multiset, double> cs;
  for (const Multiset& m : enumerate_multisets(dim, maxDeg))
    if (rng.uniform() < 0.7) cs[m] = amp * rng.uniform();
  return cs;
}

// ---------------------------------------------------------------- measure

void suite_measure(std::vector<CaseSpec>& cs) {
  cs.push_back({"add-commutes", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space s = rand_space(rng, 8);
                    FiniteMeasure a = rand_measure(rng, s);
                    FiniteMeasure b = rand_measure(rng, s);
                    double d = max_pointwise_diff(add(a, b), add(b, a));
                    if (d != 0.0) return bad("instance " + std::to_string(rep) +
                                             ": diff " + num(d));
                  }
                  return ok("50 instances, exact");
                }});
  cs.push_back({"add-associates", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space s = rand_space(rng, 8);
                    FiniteMeasure a = rand_measure(rng, s);
                    FiniteMeasure b = rand_measure(rng, s);
                    FiniteMeasure c = rand_measure(rng, s);
                    double d = max_pointwise_diff(add(add(a, b), c),
                                                  add(a, add(b, c)));
                    if (d > 1e-12) return bad("instance " +
                                              std::to_string(rep) + ": diff " +
                                              num(d));
                  }
                  return ok("50 instances within 1e-12");
                }});
  cs.push_back({"scale-distributes", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space s = rand_space(rng, 8);
                    FiniteMeasure a = rand_measure(rng, s);
                    FiniteMeasure b = rand_measure(rng, s);
                    double lam = rng.uniform(0.0, 2.0);
                    double d =
                        max_pointwise_diff(scale(lam, add(a, b)),
                                           add(scale(lam, a), scale(lam, b)));
                    if (d > 1e-12) return bad("distribute diff " + num(d));
                    if (max_pointwise_diff(scale(1.0, a), a) != 0.0)
                      return bad("scale by 1 is not the identity");
                    if (!scale(0.0, a).is_zero())
                      return bad("scale by 0 is not zero");
                  }
                  return ok("50 instances within 1e-12");
                }});
  cs.push_back({"norm-homogeneous-additive", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space s = rand_space(rng, 8);
                    FiniteMeasure a = rand_measure(rng, s);
                    FiniteMeasure b = rand_measure(rng, s);
                    double lam = rng.uniform(0.0, 2.0);
                    if (std::abs(scale(lam, a).norm() - lam * a.norm()) >
                        1e-12)
                      return bad("homogeneity failed at rep " +
                                 std::to_string(rep));
                    if (std::abs(add(a, b).norm() - (a.norm() + b.norm())) >
                        1e-12)
                      return bad("additivity failed at rep " +
                                 std::to_string(rep));
                  }
                  return ok("50 instances within 1e-12");
                }});
  cs.push_back({"order-and-partial-sub", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space s = rand_space(rng, 8);
                    FiniteMeasure a = rand_measure(rng, s);
                    FiniteMeasure b = rand_measure(rng, s);
                    FiniteMeasure sum = add(a, b);
                    if (!leq(a, sum, 0.0))
                      return bad("a <= a+b failed at rep " +
                                 std::to_string(rep));
                    double d = max_pointwise_diff(sub(sum, a), b);
                    if (d > 1e-12)
                      return bad("(a+b)-a vs b diff " + num(d));
                    FiniteMeasure bigger =
                        add(sum, FiniteMeasure::dirac(s, rng.below(s.size())));
                    bool threw = false;
                    try {
                      sub(sum, bigger);
                    } catch (const order_error&) {
                      threw = true;
                    }
                    if (!threw)
                      return bad("sub of an incomparable pair did not throw");
                  }
                  return ok("50 instances");
                }});
  cs.push_back({"pushforward-mass-conservation", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space x = rand_space(rng, 8);
                    Space y = rand_space(rng, 6);
                    FiniteMeasure mu = rand_measure(rng, x);
                    std::vector<std::optional<int>> table(x.size());
                    for (int i = 0; i < x.size(); ++i)
                      if (rng.uniform() >= 0.2) table[i] = rng.below(y.size());
                    FiniteMeasure nu = pushforward(
                        [&](int p) { return table[p]; }, mu, y);
                    if (std::abs((nu.total() + nu.lost()) -
                                 (mu.total() + mu.lost())) > 1e-12)
                      return bad("mass not conserved at rep " +
                                 std::to_string(rep));
                    for (int q = 0; q < y.size(); ++q) {
                      double want = 0.0;
                      for (const auto& [p, m] : mu.atoms())
                        if (table[p] && *table[p] == q) want += m;
                      if (std::abs(nu.mass(q) - want) > 1e-12)
                        return bad("fiber sum mismatch at rep " +
                                   std::to_string(rep));
                    }
                  }
                  return ok("50 instances within 1e-12");
                }});
  cs.push_back({"kernel-dirac-unit", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    Space x = rand_space(rng, 6);
                    Space y = rand_space(rng, 6);
                    std::vector<FiniteMeasure> rows;
                    for (int i = 0; i < x.size(); ++i) {
                      FiniteMeasure r = rand_measure(rng, y);
                      double t = r.total();
                      if (t > 1.0) r = scale(1.0 / t, r);
                      rows.push_back(r);
                    }
                    Kernel k(x, y, rows);
                    Kernel l = kernel_compose(k, Kernel::dirac(x));
                    Kernel r = kernel_compose(Kernel::dirac(y), k);
                    for (int i = 0; i < x.size(); ++i) {
                      if (max_pointwise_diff(l.row(i), k.row(i)) > 1e-12 ||
                          max_pointwise_diff(r.row(i), k.row(i)) > 1e-12)
                        return bad("dirac is not a unit at rep " +
                                   std::to_string(rep));
                    }
                    if (!k.substochastic(1e-9))
                      return bad("normalized kernel not substochastic");
                  }
                  return ok("30 instances within 1e-12");
                }});
  cs.push_back({"kernel-apply-linearity", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    Space x = rand_space(rng, 6);
                    Space y = rand_space(rng, 6);
                    std::vector<FiniteMeasure> rows;
                    for (int i = 0; i < x.size(); ++i)
                      rows.push_back(rand_measure(rng, y));
                    Kernel k(x, y, rows);
                    FiniteMeasure mu = rand_measure(rng, x);
                    FiniteMeasure got = kernel_apply(k, mu);
                    for (int q = 0; q < y.size(); ++q) {
                      double want = 0.0;
                      for (const auto& [p, m] : mu.atoms())
                        want += m * rows[p].mass(q);
                      if (std::abs(got.mass(q) - want) > 1e-12)
                        return bad("row expansion mismatch at rep " +
                                   std::to_string(rep));
                    }
                    FiniteMeasure nu = rand_measure(rng, x);
                    double d = max_pointwise_diff(
                        kernel_apply(k, add(mu, nu)),
                        add(kernel_apply(k, mu), kernel_apply(k, nu)));
                    if (d > 1e-12) return bad("linearity diff " + num(d));
                  }
                  return ok("30 instances within 1e-12");
                }});
  cs.push_back({"integrate-path-bilinear", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    Space x = rand_space(rng, 6);
                    Space y = rand_space(rng, 6);
                    std::vector<FiniteMeasure> vals;
                    for (int i = 0; i < x.size(); ++i)
                      vals.push_back(rand_measure(rng, y));
                    Path<FiniteMeasure> beta(x, vals);
                    FiniteMeasure mu = rand_measure(rng, x);
                    FiniteMeasure nu = rand_measure(rng, x);
                    double a = rng.uniform(), b = rng.uniform();
                    FiniteMeasure lhs = integrate_path(
                        beta, add(scale(a, mu), scale(b, nu)));
                    FiniteMeasure rhs =
                        add(scale(a, integrate_path(beta, mu)),
                            scale(b, integrate_path(beta, nu)));
                    if (max_pointwise_diff(lhs, rhs) > 1e-12)
                      return bad("bilinearity failed at rep " +
                                 std::to_string(rep));
                    double sup = 0.0;
                    for (const auto& v : vals) sup = std::max(sup, v.total());
                    if (integrate_path(beta, mu).total() >
                        sup * mu.total() + 1e-12)
                      return bad("norm bound violated at rep " +
                                 std::to_string(rep));
                  }
                  return ok("30 instances within 1e-12");
                }});
}

// ----------------------------------------------------------------- fubini

SuiteCase fubini_batch(RngStream& rng, int batchSize) {
  for (int rep = 0; rep < batchSize; ++rep) {
    Space x = rand_space(rng, 5);
    Space y = rand_space(rng, 5);
    std::vector<FiniteMeasure> vals;
    for (int i = 0; i < x.size(); ++i) vals.push_back(rand_measure(rng, y));
    Path<FiniteMeasure> beta(x, vals);
    FiniteMeasure mu = rand_measure(rng, x);
    FiniteMeasure nu = integrate_path(beta, mu);
    std::vector<double> g(y.size());
    for (double& v : g) v = rng.uniform();

    // One scalar, three orders: through the library, x-then-y, y-then-x.
    double viaLib = 0.0;
    for (const auto& [q, m] : nu.atoms()) viaLib += g[q] * m;
    double xy = 0.0;
    for (int p = 0; p < x.size(); ++p) {
      double inner = 0.0;
      for (int q = 0; q < y.size(); ++q) inner += g[q] * vals[p].mass(q);
      xy += mu.mass(p) * inner;
    }
    double yx = 0.0;
    for (int q = 0; q < y.size(); ++q) {
      double inner = 0.0;
      for (int p = 0; p < x.size(); ++p) inner += mu.mass(p) * vals[p].mass(q);
      yx += g[q] * inner;
    }
    if (std::abs(viaLib - xy) > 1e-12 || std::abs(xy - yx) > 1e-12)
      return bad("orders disagree at rep " + std::to_string(rep) + ": " +
                 num(viaLib) + " / " + num(xy) + " / " + num(yx));
  }
  return ok(std::to_string(batchSize) + " instances within 1e-12");
}

void suite_fubini(std::vector<CaseSpec>& cs) {
  for (int b = 0; b < 8; ++b)
    cs.push_back({"orders-batch-" + std::to_string(b),
                  [](RngStream& rng) { return fubini_batch(rng, 25); }});
  cs.push_back({"change-of-variable", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Space x = rand_space(rng, 8);
                    Space y = rand_space(rng, 6);
                    FiniteMeasure mu = rand_measure(rng, x);
                    std::vector<std::optional<int>> phi(x.size());
                    for (int i = 0; i < x.size(); ++i)
                      if (rng.uniform() >= 0.2) phi[i] = rng.below(y.size());
                    FiniteMeasure nu =
                        pushforward([&](int p) { return phi[p]; }, mu, y);
                    std::vector<double> f(y.size());
                    for (double& v : f) v = rng.uniform();
                    double lhs = 0.0;
                    for (const auto& [q, m] : nu.atoms()) lhs += f[q] * m;
                    double rhs = 0.0;
                    for (const auto& [p, m] : mu.atoms())
                      if (phi[p]) rhs += f[*phi[p]] * m;
                    if (std::abs(lhs - rhs) > 1e-12)
                      return bad("substitution mismatch " + num(lhs - rhs));
                  }
                  return ok("50 instances within 1e-12");
                }});
  cs.push_back({"dirac-density", [](RngStream& rng) {
                  // Two linear maps built to agree on Dirac measures must
                  // agree on every measure.
                  for (int rep = 0; rep < 30; ++rep) {
                    Space x = rand_space(rng, 6);
                    Space y = rand_space(rng, 6);
                    std::vector<FiniteMeasure> rows;
                    for (int i = 0; i < x.size(); ++i)
                      rows.push_back(rand_measure(rng, y));
                    Kernel k(x, y, rows);
                    Path<FiniteMeasure> beta(x, rows);
                    for (int p = 0; p < x.size(); ++p) {
                      FiniteMeasure d = FiniteMeasure::dirac(x, p);
                      if (max_pointwise_diff(kernel_apply(k, d),
                                             integrate_path(beta, d)) > 1e-12)
                        return bad("maps differ on a dirac");
                    }
                    FiniteMeasure mu = rand_measure(rng, x);
                    if (max_pointwise_diff(kernel_apply(k, mu),
                                           integrate_path(beta, mu)) > 1e-12)
                      return bad("maps differ on a general measure");
                  }
                  return ok("30 instances within 1e-12");
                }});
  cs.push_back({"iterated-vs-product", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    Space x = rand_space(rng, 5);
                    Space y = rand_space(rng, 5);
                    FiniteMeasure mu = rand_measure(rng, x);
                    FiniteMeasure nu = rand_measure(rng, y);
                    std::vector<Path<double>> inner;
                    for (int p = 0; p < x.size(); ++p) {
                      std::vector<double> row(y.size());
                      for (double& v : row) v = rng.uniform();
                      inner.emplace_back(y, row);
                    }
                    Path<Path<double>> eta(x, inner);
                    Path<double> flat = flatten_path(eta);
                    double viaProduct =
                        integrate_path(flat, product_measure(mu, nu));
                    std::vector<double> per(x.size());
                    for (int p = 0; p < x.size(); ++p)
                      per[p] = integrate_path(inner[p], nu);
                    double iterated = integrate_path(Path<double>(x, per), mu);
                    if (std::abs(viaProduct - iterated) > 1e-12)
                      return bad("product vs iterated diff " +
                                 num(viaProduct - iterated));
                  }
                  return ok("30 instances within 1e-12");
                }});
}

// --------------------------------------------------------------- monotone

AnalyticSeries bool_simplex_series() {
  // f(x) = sum_{n=1..8} 2^n x0^n x1^n; on the two-point simplex every
  // term is at most 2^-n, so the truncation converges toward 1.
  std::map<Multiset, double> cs;
  for (int n = 1; n <= 8; ++n) {
    Multiset m;
    m.insert(m.end(), n, 0);
    m.insert(m.end(), n, 1);
    cs[m] = std::ldexp(1.0, n);
  }
  return AnalyticSeries(2, 16, std::move(cs));
}

void suite_monotone(std::vector<CaseSpec>& cs) {
  cs.push_back({"bool-simplex-series", [](RngStream& rng) {
                  AnalyticSeries f = bool_simplex_series();
                  if (f.eval({1.0, 0.0}) != 0.0 || f.eval({0.0, 1.0}) != 0.0)
                    return bad("edge values are not exactly 0");
                  double mid = f.eval({0.5, 0.5});
                  if (std::abs(mid - 0.99609375) > 1e-12)
                    return bad("midpoint value " + num(mid));
                  std::uint64_t s = rng.bits();
                  TotMonReport rep = check_total_monotone(
                      f.as_fn(), Ball::simplex(2), 4, 120, s);
                  if (!rep.pass)
                    return bad("unexpected witness: " +
                               rep.witness.describe());
                  return ok("orders 1..4, 120 samples, midpoint " + num(mid));
                }});
  cs.push_back({"uv-counterexample", [](RngStream& rng) {
                  RealFn f = [](const std::vector<double>& x) {
                    return x[0] + x[1] - x[0] * x[1];
                  };
                  Ball cube = Ball::cube(2);
                  for (int rep = 0; rep < 30; ++rep) {
                    double a = rng.uniform(), b = rng.uniform();
                    FdiffResult d =
                        fdiff(f, {{a, 0.0}, {0.0, b}}, {0.0, 0.0}, cube);
                    if (std::abs(d.delta() + a * b) > 1e-12)
                      return bad("order-2 difference is not -ab: " +
                                 num(d.delta()));
                  }
                  TotMonReport rep =
                      check_total_monotone(f, cube, 2, 200, rng.bits());
                  if (rep.pass)
                    return bad("no witness found for u+v-uv");
                  if (rep.witness.order != 2)
                    return bad("witness at unexpected order " +
                               std::to_string(rep.witness.order));
                  FdiffResult re = fdiff(f, rep.witness.us, rep.witness.x,
                                         cube);
                  if (re.minus <= re.plus)
                    return bad("witness does not reproduce");
                  return ok("witness " + rep.witness.describe());
                }});
  cs.push_back({"nonneg-series-pass", [](RngStream& rng) {
                  for (int rep = 0; rep < 10; ++rep) {
                    int dim = 1 + rng.below(3);
                    AnalyticSeries f(dim, 3,
                                     rand_coeffs(rng, dim, 3, 0.5));
                    TotMonReport r = check_total_monotone(
                        f.as_fn(), Ball::simplex(dim), 3, 60, rng.bits());
                    if (!r.pass)
                      return bad("series " + std::to_string(rep) +
                                 " flagged: " + r.witness.describe());
                  }
                  return ok("10 nonnegative series, orders 1..3");
                }});
  cs.push_back({"difference-kills-low-degree", [](RngStream& rng) {
                  // An order-3 iterated difference of a degree-2
                  // polynomial vanishes.
                  for (int rep = 0; rep < 20; ++rep) {
                    AnalyticSeries f(2, 2, rand_coeffs(rng, 2, 2, 1.0));
                    Ball cube = Ball::cube(2);
                    std::vector<double> x{0.2 * rng.uniform(),
                                          0.2 * rng.uniform()};
                    std::vector<std::vector<double>> us;
                    for (int i = 0; i < 3; ++i)
                      us.push_back({0.2 * rng.uniform(), 0.2 * rng.uniform()});
                    FdiffResult d = fdiff(f.as_fn(), us, x, cube);
                    if (std::abs(d.delta()) > 1e-9)
                      return bad("nonzero order-3 difference " +
                                 num(d.delta()));
                  }
                  return ok("20 instances within 1e-9");
                }});
  cs.push_back({"order1-is-monotone", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    int dim = 1 + rng.below(3);
                    AnalyticSeries f(dim, 2,
                                     rand_coeffs(rng, dim, 2, 0.5));
                    Ball ball = Ball::simplex(dim);
                    std::vector<double> x = ball.sample_point(rng, 0.4);
                    std::vector<double> step =
                        ball.sample_point(rng, 0.3);
                    FdiffResult d = fdiff(f.as_fn(), {step}, x, ball);
                    if (d.delta() < -1e-12)
                      return bad("negative first difference " +
                                 num(d.delta()));
                  }
                  return ok("50 first differences nonnegative");
                }});
}

// --------------------------------------------------------------- polarize

void suite_polarize(std::vector<CaseSpec>& cs) {
  cs.push_back({"roundtrip-identity", [](RngStream& rng) {
                  for (int rep = 0; rep < 100; ++rep) {
                    int n = 1 + rng.below(4);
                    int dim = 1 + rng.below(3);
                    std::map<Multiset, double> coeffs;
                    for (const Multiset& m :
                         enumerate_multisets_exact(dim, n))
                      coeffs[m] = rng.uniform();
                    SymCoeffs c(n, dim, coeffs);
                    SymCoeffs back = polarize(c.diagonal());
                    for (const auto& [m, v] : coeffs)
                      if (std::abs(back.coeff(m) - v) > 1e-10)
                        return bad("coeff drift " +
                                   num(back.coeff(m) - v) + " at rep " +
                                   std::to_string(rep));
                  }
                  return ok("100 instances within 1e-10");
                }});
  cs.push_back({"norm-bound", [](RngStream& rng) {
                  // Over the cube both sups are attained at the all-ones
                  // point (all coefficients are nonnegative), so the
                  // n^n/n! bound can be checked against exact values.
                  for (int rep = 0; rep < 30; ++rep) {
                    int n = 1 + rng.below(3);
                    int dim = 1 + rng.below(3);
                    std::map<Multiset, double> coeffs;
                    for (const Multiset& m :
                         enumerate_multisets_exact(dim, n))
                      coeffs[m] = rng.uniform();
                    AnalyticSeries f(dim, n, coeffs);
                    SymCoeffs form = polarize(f);
                    std::vector<double> ones(dim, 1.0);
                    double fNorm = f.eval(ones);
                    double formAtOnes = form.eval(
                        std::vector<std::vector<double>>(n, ones));
                    double bound =
                        std::pow(double(n), n) / factorial(n) * fNorm;
                    if (formAtOnes > bound * (1 + 1e-12) + 1e-12)
                      return bad("bound violated: " + num(formAtOnes) +
                                 " > " + num(bound));
                    Ball cube = Ball::cube(dim);
                    for (int t = 0; t < 20; ++t) {
                      std::vector<std::vector<double>> args;
                      for (int i = 0; i < n; ++i)
                        args.push_back(cube.sample_point(rng, 0.9));
                      if (form.eval(args) > formAtOnes + 1e-12)
                        return bad("interior tuple beats the top point");
                    }
                  }
                  return ok("30 instances, exact sups at the top point");
                }});
  cs.push_back({"gradient-matches-fd", [](RngStream& rng) {
                  for (int rep = 0; rep < 20; ++rep) {
                    int dim = 1 + rng.below(3);
                    AnalyticSeries f(dim, 4, rand_coeffs(rng, dim, 4, 1.0));
                    Ball cube = Ball::cube(dim);
                    std::vector<double> x0 = cube.sample_point(rng, 0.5);
                    AnalyticSeries g = local_shift(f, x0, &cube);
                    const double h = 1e-5;
                    for (int i = 0; i < dim; ++i) {
                      std::vector<double> hi = x0, lo = x0;
                      hi[i] += h;
                      lo[i] -= h;
                      double fd = (f.eval(hi) - f.eval(lo)) / (2 * h);
                      if (std::abs(g.coeff({i}) - fd) > 1e-6)
                        return bad("gradient drift " +
                                   num(g.coeff({i}) - fd));
                    }
                  }
                  return ok("20 instances, step 1e-5, within 1e-6");
                }});
  cs.push_back({"taylor-grade-sum", [](RngStream& rng) {
                  for (int rep = 0; rep < 20; ++rep) {
                    int dim = 1 + rng.below(3);
                    AnalyticSeries f(dim, 4, rand_coeffs(rng, dim, 4, 1.0));
                    std::vector<AnalyticSeries> parts = taylor_grade(f);
                    AnalyticSeries sum = AnalyticSeries::zero(dim, 4);
                    for (const auto& p : parts) {
                      int deg = -1;
                      if (!p.is_homogeneous(&deg))
                        return bad("component is not homogeneous");
                      sum = series_add(sum, p);
                    }
                    if (series_max_coeff_diff(sum, f) != 0.0)
                      return bad("components do not sum back to f");
                  }
                  return ok("20 instances, exact");
                }});
  cs.push_back({"compose-pointwise", [](RngStream& rng) {
                  for (int rep = 0; rep < 20; ++rep) {
                    AnalyticSeries g(1, 3, rand_coeffs(rng, 1, 3, 1.0));
                    std::map<Multiset, double> fc =
                        rand_coeffs(rng, 1, 2, 1.0);
                    double totalF = 0.0;
                    for (auto& [m, v] : fc) totalF += v;
                    if (totalF > 0)
                      for (auto& [m, v] : fc) v /= (totalF + 0.5);
                    AnalyticSeries f(1, 2, fc);
                    AnalyticSeries comp = compose_series(g, f, 6);
                    for (int t = 0; t < 5; ++t) {
                      double x = rng.uniform();
                      double want = g.eval1(f.eval1(x));
                      if (std::abs(comp.eval1(x) - want) > 1e-10)
                        return bad("composition drift " +
                                   num(comp.eval1(x) - want));
                    }
                  }
                  return ok("20 instances within 1e-10");
                }});
  cs.push_back({"rejects-mixed-degrees", [](RngStream&) {
                  AnalyticSeries mixed(1, 1,
                                       {{Multiset{}, 1.0}, {Multiset{0}, 1.0}});
                  try {
                    polarize(mixed);
                  } catch (const structural_error&) {
                    return ok("non-homogeneous input rejected");
                  }
                  return bad("polarize accepted a mixed-degree input");
                }});
}

// -------------------------------------------------------------------- pcs

PcsVector rand_ball_vector(RngStream& rng, const Pcs& p, double fill) {
  // Convex combination of generators, scaled by fill < 1.
  const auto& gens = p.gens();
  std::vector<double> x(p.web_size(), 0.0);
  std::vector<double> w(gens.size());
  double tot = 0.0;
  for (double& v : w) {
    v = rng.uniform();
    tot += v;
  }
  if (tot == 0.0) tot = 1.0;
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (int a = 0; a < p.web_size(); ++a)
      x[a] += fill * (w[g] / tot) * gens[g][a];
  return PcsVector(p, x);
}

void suite_pcs(std::vector<CaseSpec>& cs) {
  cs.push_back({"snat-norms", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    int k = rng.below(5);
                    Pcs sn = Pcs::snat(k);
                    Pcs osn = Pcs::orth_snat(k);
                    std::vector<double> x(k + 1);
                    double sum = 0.0, mx = 0.0;
                    for (double& v : x) {
                      v = rng.uniform();
                      sum += v;
                      mx = std::max(mx, v);
                    }
                    NormResult a = norm(PcsVector(sn, x));
                    NormResult b = norm(PcsVector(osn, x));
                    if (!a.exact || !b.exact)
                      return bad("stock spaces must be exact");
                    if (std::abs(a.lower - sum) > 1e-12)
                      return bad("l1 norm drift " + num(a.lower - sum));
                    if (std::abs(b.lower - mx) > 1e-12)
                      return bad("sup norm drift " + num(b.lower - mx));
                    NormResult e =
                        norm(PcsVector::basis(sn, rng.below(k + 1)));
                    if (e.lower != 1.0)
                      return bad("basis vector norm is not 1");
                  }
                  return ok("30 instances within 1e-12");
                }});
  cs.push_back({"double-orth-identity", [](RngStream& rng) {
                  std::vector<Pcs> spaces{
                      Pcs::snat(3),
                      Pcs::orth_snat(2),
                      Pcs::boolean(),
                      Pcs::with(Pcs::snat(2), Pcs::orth_snat(1)),
                      Pcs::plus(Pcs::boolean(), Pcs::snat(1)),
                      Pcs::tensor(Pcs::snat(1), Pcs::snat(1))};
                  for (const Pcs& p : spaces) {
                    Pcs pp = Pcs::orth(Pcs::orth(p));
                    if (!pp.same_web(p))
                      return bad("double orth changed the web of " +
                                 p.name());
                    for (int rep = 0; rep < 20; ++rep) {
                      std::vector<double> x(p.web_size());
                      for (double& v : x) v = rng.uniform();
                      double d = std::abs(norm(PcsVector(p, x)).lower -
                                          norm(PcsVector(pp, x)).lower);
                      if (d != 0.0)
                        return bad("double orth norm drift " + num(d));
                    }
                  }
                  return ok("6 spaces x 20 vectors, exact");
                }});
  cs.push_back({"tensor-simple-norm", [](RngStream& rng) {
                  for (int rep = 0; rep < 100; ++rep) {
                    Pcs x = Pcs::snat(rng.below(3));
                    Pcs y = rng.uniform() < 0.5
                                ? Pcs::snat(rng.below(3))
                                : Pcs::orth_snat(rng.below(3));
                    std::vector<double> a(x.web_size()), b(y.web_size());
                    for (double& v : a) v = rng.uniform();
                    for (double& v : b) v = rng.uniform();
                    Pcs t = Pcs::tensor(x, y);
                    std::vector<double> prod;
                    prod.reserve(a.size() * b.size());
                    for (double va : a)
                      for (double vb : b) prod.push_back(va * vb);
                    double got = norm(PcsVector(t, prod)).lower;
                    double want = norm(PcsVector(x, a)).lower *
                                  norm(PcsVector(y, b)).lower;
                    if (std::abs(got - want) > 1e-12)
                      return bad("simple tensor norm drift " +
                                 num(got - want));
                  }
                  return ok("100 simple tensors within 1e-12");
                }});
  cs.push_back({"morphism-preserves-ball", [](RngStream& rng) {
                  for (int rep = 0; rep < 50; ++rep) {
                    Pcs x = Pcs::snat(rng.below(3));
                    Pcs y = Pcs::snat(rng.below(3));
                    std::vector<std::vector<double>> e(
                        x.web_size(), std::vector<double>(y.web_size()));
                    for (auto& row : e)
                      for (double& v : row) v = rng.uniform();
                    PcsMatrix raw(x, y, e);
                    double est = mat_norm_estimate(raw);
                    if (est > 1.0)
                      for (auto& row : e)
                        for (double& v : row) v /= est;
                    PcsMatrix t(x, y, e);
                    if (!is_morphism(t))
                      return bad("normalized matrix is not a morphism");
                    PcsVector v = rand_ball_vector(rng, x, 0.95);
                    if (!membership(v))
                      return bad("sample left the source ball");
                    if (!membership(mat_apply(t, v)))
                      return bad("image left the target ball at rep " +
                                 std::to_string(rep));
                  }
                  return ok("50 instances");
                }});
  cs.push_back({"promotion-monotone", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    Pcs p = Pcs::snat(rng.below(3));
                    PcsVector x = rand_ball_vector(rng, p, 0.5);
                    std::vector<double> yc = x.coeffs();
                    for (double& v : yc) v += 0.4 * rng.uniform() / yc.size();
                    PcsVector y(p, yc);
                    PcsVector px = promote(x, 4);
                    PcsVector py = promote(y, 4);
                    for (int i = 0; i < px.pcs().web_size(); ++i)
                      if (px[i] > py[i] + 1e-15)
                        return bad("promotion lost monotonicity");
                  }
                  return ok("30 instances, degree 4");
                }});
  cs.push_back({"promotion-in-ball", [](RngStream& rng) {
                  for (int rep = 0; rep < 20; ++rep) {
                    Pcs p = Pcs::snat(rng.below(3));
                    PcsVector x = rand_ball_vector(rng, p, 0.98);
                    PcsVector px = promote(x, 5);
                    if (!membership(px))
                      return bad("promotion left the exponential ball");
                    NormResult n = norm(px);
                    if (n.lower > 1.0 + 1e-9)
                      return bad("promotion norm " + num(n.lower));
                  }
                  return ok("20 promotions inside the ball");
                }});
  cs.push_back({"power-series-apply", [](RngStream& rng) {
                  for (int rep = 0; rep < 20; ++rep) {
                    Pcs x = Pcs::snat(2);
                    Pcs bx = Pcs::bang(x, 3);
                    Pcs y = Pcs::snat(1);
                    std::vector<std::vector<double>> e(
                        bx.web_size(), std::vector<double>(y.web_size()));
                    for (auto& row : e)
                      for (double& v : row) v = 0.1 * rng.uniform();
                    PcsMatrix t(bx, y, e);
                    PcsVector v = rand_ball_vector(rng, x, 0.9);
                    PcsVector viaPromote = mat_apply(t, promote(v, 3));
                    PcsVector direct = power_series_apply(t, v);
                    for (int i = 0; i < y.web_size(); ++i)
                      if (std::abs(viaPromote[i] - direct[i]) > 1e-12)
                        return bad("series application drift " +
                                   num(viaPromote[i] - direct[i]));
                  }
                  return ok("20 instances within 1e-12");
                }});
  cs.push_back({"convolution-monoid", [](RngStream& rng) {
                  const int n = 6;
                  for (int rep = 0; rep < 30; ++rep) {
                    std::vector<double> a(n), b(n), c(n), unit(n, 0.0);
                    unit[0] = 1.0;
                    for (double& v : a) v = rng.uniform();
                    for (double& v : b) v = rng.uniform();
                    for (double& v : c) v = rng.uniform();
                    std::vector<double> au = nat_convolve(a, unit, n);
                    for (int i = 0; i < n; ++i)
                      if (std::abs(au[i] - a[i]) > 1e-12)
                        return bad("delta0 is not a unit");
                    std::vector<double> ab = nat_convolve(a, b, n);
                    std::vector<double> ba = nat_convolve(b, a, n);
                    for (int i = 0; i < n; ++i)
                      if (std::abs(ab[i] - ba[i]) > 1e-12)
                        return bad("convolution is not commutative");
                    std::vector<double> l =
                        nat_convolve(nat_convolve(a, b, n), c, n);
                    std::vector<double> r =
                        nat_convolve(a, nat_convolve(b, c, n), n);
                    for (int i = 0; i < n; ++i)
                      if (std::abs(l[i] - r[i]) > 1e-12)
                        return bad("convolution is not associative");
                  }
                  return ok("30 instances within 1e-12");
                }});
}

// ----------------------------------------------------------------- cantor

// Explicit antichain enumeration on the depth-truncated tree. Mirrors no
// code from antichain_norm: it materializes every antichain as a set.
void enumerate_antichains(const std::string& s, int depth,
                          std::vector<std::vector<std::string>>& out) {
  out.clear();
  out.push_back({});      // empty antichain
  out.push_back({s});     // the node itself
  if (static_cast<int>(s.size()) == depth) return;
  std::vector<std::vector<std::string>> left, right;
  enumerate_antichains(s + "0", depth, left);
  enumerate_antichains(s + "1", depth, right);
  out.clear();
  out.push_back({s});
  for (const auto& a : left)
    for (const auto& b : right) {
      std::vector<std::string> merged = a;
      merged.insert(merged.end(), b.begin(), b.end());
      out.push_back(std::move(merged));
    }
}

// Sum of an antichain's values through the tree structure, so the
// floating-point additions match the dynamic program's shape exactly.
double antichain_value(const TreeVector& x, const std::string& s, int depth,
                       const std::vector<std::string>& chain) {
  for (const auto& t : chain)
    if (t == s) return x.at(s);
  if (static_cast<int>(s.size()) == depth) return 0.0;
  return antichain_value(x, s + "0", depth, chain) +
         antichain_value(x, s + "1", depth, chain);
}

TreeVector rand_additive(RngStream& rng, int depth) {
  std::map<std::string, double> cs;
  std::function<double(const std::string&)> fill =
      [&](const std::string& s) -> double {
    if (static_cast<int>(s.size()) == depth) {
      double v = rng.uniform();
      cs[s] = v;
      return v;
    }
    double v = fill(s + "0") + fill(s + "1");
    cs[s] = v;
    return v;
  };
  fill("");
  return TreeVector(depth, cs);
}

void suite_cantor(std::vector<CaseSpec>& cs) {
  cs.push_back({"antichain-count", [](RngStream&) {
                  // N(d) = N(d-1)^2 + 1 with N(0) = 2 (empty, root).
                  long expected = 2;
                  for (int d = 0; d <= 3; ++d) {
                    std::vector<std::vector<std::string>> all;
                    enumerate_antichains("", d, all);
                    if (static_cast<long>(all.size()) != expected)
                      return bad("depth " + std::to_string(d) + ": " +
                                 std::to_string(all.size()) + " antichains");
                    expected = expected * expected + 1;
                  }
                  return ok("counts 2, 5, 26, 677 at depths 0..3");
                }});
  cs.push_back({"dp-vs-enumeration", [](RngStream& rng) {
                  std::vector<std::vector<std::string>> all;
                  enumerate_antichains("", 3, all);
                  for (int rep = 0; rep < 50; ++rep) {
                    std::map<std::string, double> coeffs;
                    std::function<void(const std::string&)> fill =
                        [&](const std::string& s) {
                          coeffs[s] = rng.uniform();
                          if (s.size() < 3) {
                            fill(s + "0");
                            fill(s + "1");
                          }
                        };
                    fill("");
                    TreeVector x(3, coeffs);
                    double best = 0.0;
                    for (const auto& chain : all)
                      best = std::max(best,
                                      antichain_value(x, "", 3, chain));
                    if (antichain_norm(x) != best)
                      return bad("dp " + num(antichain_norm(x)) +
                                 " vs enumeration " + num(best));
                  }
                  return ok("50 vectors at depth 3, exact");
                }});
  cs.push_back({"roundtrip-additive", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    int depth = 1 + rng.below(5);
                    TreeVector x = rand_additive(rng, depth);
                    TreeVector back = from_measure(to_measure(x), depth);
                    if (tree_max_diff(x, back) != 0.0)
                      return bad("round trip drift at depth " +
                                 std::to_string(depth));
                  }
                  return ok("30 additive vectors, bit-exact");
                }});
  cs.push_back({"additive-norm-is-root", [](RngStream& rng) {
                  for (int rep = 0; rep < 30; ++rep) {
                    int depth = 1 + rng.below(5);
                    TreeVector x = rand_additive(rng, depth);
                    if (!is_additive(x))
                      return bad("constructed vector is not additive");
                    if (antichain_norm(x) != x.at(""))
                      return bad("norm differs from the root mass");
                  }
                  return ok("30 additive vectors, exact");
                }});
  cs.push_back({"theta-equalizer", [](RngStream& rng) {
                  for (int rep = 0; rep < 20; ++rep) {
                    int depth = 1 + rng.below(4);
                    TreeVector x = rand_additive(rng, depth);
                    TreeVector tx = theta_apply(x);
                    for (const auto& [s, v] : x.coeffs()) {
                      if (static_cast<int>(s.size()) == depth) continue;
                      if (tx.at(s) != v)
                        return bad("theta moved an additive vector");
                    }
                    std::string inner;
                    for (int i = 0; i < depth - 1; ++i)
                      inner += (rng.below(2) ? "1" : "0");
                    TreeVector y = x.with_entry(inner, x.at(inner) + 0.1);
                    if (is_additive(y))
                      return bad("perturbed vector still flagged additive");
                    if (std::abs(theta_apply(y).at(inner) - y.at(inner)) <
                        0.05)
                      return bad("theta did not detect the perturbation");
                  }
                  return ok("20 instances");
                }});
  cs.push_back({"coin-flip", [](RngStream&) {
                  for (int depth = 1; depth <= 6; ++depth) {
                    TreeVector x = TreeVector::coin_flip(depth);
                    if (!is_additive(x))
                      return bad("coin flip vector is not additive");
                    if (antichain_norm(x) != 1.0)
                      return bad("coin flip norm is not 1");
                    if (tree_max_diff(
                            x, from_measure(to_measure(x), depth)) != 0.0)
                      return bad("coin flip round trip drift");
                  }
                  return ok("depths 1..6, exact");
                }});
}

}  // namespace

int SuiteResult::passed() const {
  int n = 0;
  for (const auto& c : cases) n += c.pass ? 1 : 0;
  return n;
}

int SuiteResult::failed() const {
  return static_cast<int>(cases.size()) - passed();
}

std::vector<std::string> suite_names() {
  return {"measure-axioms", "fubini", "monotone", "polarize", "pcs", "cantor"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int jobs) {
  std::vector<CaseSpec> specs;
  if (name == "measure-axioms")
    suite_measure(specs);
  else if (name == "fubini")
    suite_fubini(specs);
  else if (name == "monotone")
    suite_monotone(specs);
  else if (name == "polarize")
    suite_polarize(specs);
  else if (name == "pcs")
    suite_pcs(specs);
  else if (name == "cantor")
    suite_cantor(specs);
  else
    throw structural_error("unknown suite: " + name);

  SuiteResult result;
  result.suite = name;
  result.seed = seed;
  result.cases.resize(specs.size());

  auto runCase = [&](std::size_t i) {
    RngStream rng(seed, 0x1000 + i);
    SuiteCase c;
    try {
      c = specs[i].run(rng);
    } catch (const std::exception& e) {
      c = bad(std::string("exception: ") + e.what());
    }
    c.name = specs[i].name;
    result.cases[i] = std::move(c);
  };

  int workers = std::max(1, std::min<int>(jobs, specs.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) runCase(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < specs.size();
             i = next.fetch_add(1))
          runCase(i);
      });
    for (auto& t : pool) t.join();
  }
  return result;
}

}  // namespace cones
