#include "cones/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cones {

namespace {

void validate_multiset(const Multiset& m, int dim, const char* who) {
  if (!std::is_sorted(m.begin(), m.end()))
    throw structural_error(std::string(who) + ": multiset key not sorted");
  for (int a : m)
    if (a < 0 || a >= dim)
      throw structural_error(std::string(who) +
                             ": multiset coordinate outside dimension");
}

void validate_value(double c, const char* who) {
  if (std::isnan(c)) throw structural_error(std::string(who) + ": NaN coefficient");
  if (c < 0.0)
    throw structural_error(std::string(who) + ": negative coefficient");
}

}  // namespace

AnalyticSeries::AnalyticSeries(int dim, int maxDegree,
                               std::map<Multiset, double> coeffs)
    : dim_(dim), maxDegree_(maxDegree) {
  if (dim < 0 || maxDegree < 0)
    throw structural_error("AnalyticSeries: negative dimension or degree");
  for (auto& [m, c] : coeffs) {
    validate_multiset(m, dim, "AnalyticSeries");
    if (ms_size(m) > maxDegree)
      throw structural_error("AnalyticSeries: term exceeds maxDegree");
    validate_value(c, "AnalyticSeries");
    if (c > 0.0) coeffs_.emplace(m, c);
  }
}

AnalyticSeries AnalyticSeries::zero(int dim, int maxDegree) {
  return AnalyticSeries(dim, maxDegree, {});
}

AnalyticSeries AnalyticSeries::constant(int dim, double c, int maxDegree) {
  std::map<Multiset, double> cs;
  if (c != 0.0) cs.emplace(Multiset{}, c);
  return AnalyticSeries(dim, maxDegree, std::move(cs));
}

double AnalyticSeries::coeff(const Multiset& m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double AnalyticSeries::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw structural_error("AnalyticSeries::eval: dimension mismatch");
  std::vector<double> terms;
  terms.reserve(coeffs_.size());
  for (const auto& [m, c] : coeffs_) terms.push_back(c * monomial_eval(m, x));
  return pairwise_sum(terms);
}

double AnalyticSeries::eval1(double x) const {
  return eval(std::vector<double>{x});
}

std::function<double(const std::vector<double>&)> AnalyticSeries::as_fn()
    const {
  return [self = *this](const std::vector<double>& x) { return self.eval(x); };
}

bool AnalyticSeries::is_homogeneous(int* degree) const {
  int d = -1;
  for (const auto& [m, c] : coeffs_) {
    if (d < 0)
      d = ms_size(m);
    else if (ms_size(m) != d)
      return false;
  }
  if (degree) *degree = std::max(d, 0);
  return true;
}

AnalyticSeries AnalyticSeries::truncated(int newMaxDegree) const {
  std::map<Multiset, double> cs;
  for (const auto& [m, c] : coeffs_)
    if (ms_size(m) <= newMaxDegree) cs.emplace(m, c);
  return AnalyticSeries(dim_, newMaxDegree, std::move(cs));
}

AnalyticSeries series_add(const AnalyticSeries& a, const AnalyticSeries& b) {
  if (a.dim() != b.dim())
    throw structural_error("series_add: dimension mismatch");
  std::map<Multiset, double> cs = a.coeffs();
  for (const auto& [m, c] : b.coeffs()) cs[m] += c;
  return AnalyticSeries(a.dim(), std::max(a.max_degree(), b.max_degree()),
                        std::move(cs));
}

AnalyticSeries series_scale(const AnalyticSeries& a, double s) {
  if (s < 0.0) throw structural_error("series_scale: negative scalar");
  std::map<Multiset, double> cs;
  for (const auto& [m, c] : a.coeffs()) cs.emplace(m, c * s);
  return AnalyticSeries(a.dim(), a.max_degree(), std::move(cs));
}

AnalyticSeries series_mul(const AnalyticSeries& a, const AnalyticSeries& b,
                          int maxDegree) {
  if (a.dim() != b.dim())
    throw structural_error("series_mul: dimension mismatch");
  std::map<Multiset, double> cs;
  for (const auto& [ma, ca] : a.coeffs())
    for (const auto& [mb, cb] : b.coeffs()) {
      if (ms_size(ma) + ms_size(mb) > maxDegree) continue;
      cs[ms_union(ma, mb)] += ca * cb;
    }
  return AnalyticSeries(a.dim(), maxDegree, std::move(cs));
}

double series_max_coeff_diff(const AnalyticSeries& a, const AnalyticSeries& b) {
  double worst = 0.0;
  for (const auto& [m, c] : a.coeffs())
    worst = std::max(worst, std::abs(c - b.coeff(m)));
  for (const auto& [m, c] : b.coeffs())
    worst = std::max(worst, std::abs(c - a.coeff(m)));
  return worst;
}

SymCoeffs::SymCoeffs(int arity, int dim, std::map<Multiset, double> coeffs)
    : arity_(arity), dim_(dim) {
  if (arity < 0 || dim < 0)
    throw structural_error("SymCoeffs: negative arity or dimension");
  for (auto& [m, c] : coeffs) {
    validate_multiset(m, dim, "SymCoeffs");
    if (ms_size(m) != arity)
      throw structural_error("SymCoeffs: multiset size differs from arity");
    validate_value(c, "SymCoeffs");
    if (c > 0.0) coeffs_.emplace(m, c);
  }
}

double SymCoeffs::coeff(const Multiset& m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double SymCoeffs::eval(const std::vector<std::vector<double>>& args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw structural_error("SymCoeffs::eval: arity mismatch");
  for (const auto& a : args)
    if (static_cast<int>(a.size()) != dim_)
      throw structural_error("SymCoeffs::eval: dimension mismatch");
  std::vector<double> terms;
  terms.reserve(coeffs_.size());
  std::vector<int> perm(arity_);
  for (const auto& [m, c] : coeffs_) {
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
      double prod = 1.0;
      for (int k = 0; k < arity_; ++k) prod *= args[perm[k]][m[k]];
      sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    terms.push_back(c * sum / ms_factorial(m));
  }
  return pairwise_sum(terms);
}

AnalyticSeries SymCoeffs::diagonal() const {
  std::map<Multiset, double> cs;
  for (const auto& [m, c] : coeffs_) cs.emplace(m, c * ms_multinomial(m));
  return AnalyticSeries(dim_, arity_, std::move(cs));
}

SymCoeffs polarize(const AnalyticSeries& f) {
  int n = 0;
  if (!f.is_homogeneous(&n))
    throw structural_error("polarize: series is not homogeneous");
  double nfact = factorial(n);
  std::map<Multiset, double> cs;
  std::vector<double> point(f.dim());
  for (const auto& [m, c0] : f.coeffs()) {
    // c_m = h(e_{b_1},...,e_{b_n}) for the basis tuple of m, expanded by
    // the finite-difference polarization formula at 0.
    double acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::fill(point.begin(), point.end(), 0.0);
      int bits = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          point[m[i]] += 1.0;
          ++bits;
        }
      double v = f.eval(point);
      acc += ((n - bits) % 2 == 0) ? v : -v;
    }
    double cm = acc / nfact;
    if (cm < 0.0 && cm > -1e-9) cm = 0.0;  // polarization round-off
    cs.emplace(m, cm);
  }
  return SymCoeffs(n, f.dim(), std::move(cs));
}

std::vector<AnalyticSeries> taylor_grade(const AnalyticSeries& f) {
  std::vector<std::map<Multiset, double>> parts(f.max_degree() + 1);
  for (const auto& [m, c] : f.coeffs()) parts[ms_size(m)].emplace(m, c);
  std::vector<AnalyticSeries> out;
  out.reserve(parts.size());
  for (auto& p : parts)
    out.emplace_back(f.dim(), f.max_degree(), std::move(p));
  return out;
}

AnalyticSeries local_shift(const AnalyticSeries& f,
                           const std::vector<double>& x0, const Ball* ball) {
  if (static_cast<int>(x0.size()) != f.dim())
    throw structural_error("local_shift: basepoint dimension mismatch");
  Ball domain = ball ? *ball : Ball::cube(f.dim());
  if (!domain.contains(x0, 1e-9))
    throw order_error("local_shift: basepoint outside the unit ball");
  std::map<Multiset, double> cs;
  for (const auto& [m, c] : f.coeffs()) {
    for_each_submultiset(
        m, [&](const Multiset& k, double choose, const Multiset& rest) {
          double w = c * choose * monomial_eval(rest, x0);
          if (w != 0.0) cs[k] += w;
        });
  }
  return AnalyticSeries(f.dim(), f.max_degree(), std::move(cs));
}

AnalyticSeries compose_series(const AnalyticSeries& g, const AnalyticSeries& f,
                              int outDegree, const Ball* ball) {
  if (g.dim() != 1)
    throw structural_error("compose_series: outer series must be univariate");
  Ball domain = ball ? *ball : Ball::cube(f.dim());
  double reach = sampled_sup(domain, 128, f.as_fn());
  if (reach > 1.0 + 1e-9)
    throw order_error(
        "compose_series: inner series leaves the outer unit ball (sampled "
        "sup " +
        std::to_string(reach) + ")");

  double f0 = f.coeff(Multiset{});
  AnalyticSeries gShift =
      f0 != 0.0 ? local_shift(g, std::vector<double>{f0}) : g;
  std::map<Multiset, double> tail = f.coeffs();
  tail.erase(Multiset{});
  AnalyticSeries fTail(f.dim(), f.max_degree(), std::move(tail));

  AnalyticSeries acc = AnalyticSeries::zero(f.dim(), outDegree);
  AnalyticSeries power = AnalyticSeries::constant(f.dim(), 1.0, outDegree);
  for (int l = 0; l <= outDegree; ++l) {
    double gl = gShift.coeff(Multiset(l, 0));
    if (gl != 0.0) acc = series_add(acc, series_scale(power, gl));
    if (l < outDegree) power = series_mul(power, fTail, outDegree);
  }
  return acc.truncated(outDegree);
}

}  // namespace cones
