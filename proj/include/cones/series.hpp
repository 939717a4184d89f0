#pragma once

#include <functional>
#include <map>
#include <vector>

#include "cones/ball.hpp"
#include "cones/multiset.hpp"

namespace cones {

// Polynomial with nonnegative coefficients in the plain monomial basis:
// f(x) = sum_m c_m x^m, multisets m of coordinates with |m| <= maxDegree.
class AnalyticSeries {
 public:
  AnalyticSeries(int dim, int maxDegree, std::map<Multiset, double> coeffs);

  static AnalyticSeries zero(int dim, int maxDegree);
  static AnalyticSeries constant(int dim, double c, int maxDegree = 0);

  int dim() const { return dim_; }
  int max_degree() const { return maxDegree_; }
  const std::map<Multiset, double>& coeffs() const { return coeffs_; }
  double coeff(const Multiset& m) const;

  double eval(const std::vector<double>& x) const;
  double eval1(double x) const;  // univariate convenience
  std::function<double(const std::vector<double>&)> as_fn() const;

  // True iff every term has the same size; reports that size (0 for the
  // zero series).
  bool is_homogeneous(int* degree = nullptr) const;
  AnalyticSeries truncated(int newMaxDegree) const;

 private:
  int dim_;
  int maxDegree_;
  std::map<Multiset, double> coeffs_;
};

AnalyticSeries series_add(const AnalyticSeries& a, const AnalyticSeries& b);
AnalyticSeries series_scale(const AnalyticSeries& a, double s);
AnalyticSeries series_mul(const AnalyticSeries& a, const AnalyticSeries& b,
                          int maxDegree);
double series_max_coeff_diff(const AnalyticSeries& a, const AnalyticSeries& b);

// Symmetric n-linear form stored against the symmetrized monomial basis:
// the diagonal restriction is sum_m c_m (n!/m!) x^m.
class SymCoeffs {
 public:
  SymCoeffs(int arity, int dim, std::map<Multiset, double> coeffs);

  int arity() const { return arity_; }
  int dim() const { return dim_; }
  const std::map<Multiset, double>& coeffs() const { return coeffs_; }
  double coeff(const Multiset& m) const;

  double eval(const std::vector<std::vector<double>>& args) const;
  // Homogeneous polynomial induced on the diagonal.
  AnalyticSeries diagonal() const;

 private:
  int arity_;
  int dim_;
  std::map<Multiset, double> coeffs_;
};

// Unique symmetric multilinear form whose diagonal is the homogeneous f,
// computed by the finite-difference polarization formula at 0.
SymCoeffs polarize(const AnalyticSeries& f);

// Homogeneous components by degree, 0..maxDegree; their sum is f.
std::vector<AnalyticSeries> taylor_grade(const AnalyticSeries& f);

// g with g(u) = f(x0 + u), the series of f on the local cone at x0.
// `ball` defaults to the unit cube of f's dimension.
AnalyticSeries local_shift(const AnalyticSeries& f,
                           const std::vector<double>& x0,
                           const Ball* ball = nullptr);

// Truncated composition g(f(x)) for univariate g; when f(0) != 0 the
// composition is split through the local shift of g at f(0).
AnalyticSeries compose_series(const AnalyticSeries& g, const AnalyticSeries& f,
                              int outDegree, const Ball* ball = nullptr);

}  // namespace cones
