#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cones/space.hpp"

namespace cones {

// A finite nonnegative measure on a finite space, stored sparsely: only
// strictly positive masses are kept, and masses below prune_floor() are
// dropped after every operation. The cone norm is the total mass.
//
// Two diagnostics ride along with the value:
//   lost    - mass dropped because a partial primitive (log, sqrt, ...)
//             was undefined at an atom;
//   clamped - mass that was snapped to a boundary bin because its target
//             fell outside a grid's range (the mass itself is kept).
class FiniteMeasure {
 public:
  explicit FiniteMeasure(const Space& s) : space_(s) {}

  static FiniteMeasure zero(const Space& s) { return FiniteMeasure(s); }
  static FiniteMeasure dirac(const Space& s, int point);
  // Dirac on a grid at an arbitrary real, snapped to its bin.
  static FiniteMeasure dirac_real(const Space& grid, double r);
  static FiniteMeasure from_masses(const Space& s,
                                   const std::map<int, double>& masses);

  const Space& space() const { return space_; }
  const std::map<int, double>& atoms() const { return mass_; }
  double mass(int point) const;
  double total() const;
  double norm() const { return total(); }
  bool is_zero() const { return mass_.empty(); }

  double lost() const { return lost_; }
  double clamped() const { return clamped_; }
  void set_lost(double lost) { lost_ = lost; }
  void set_clamped(double clamped) { clamped_ = clamped; }

  // In-place accumulation used by the operation implementations; ignores
  // non-positive contributions.
  void accumulate(int point, double m);
  // Drop masses below prune_floor(); every operation calls this once on
  // its result before returning.
  void prune();

 private:
  Space space_;
  std::map<int, double> mass_;
  double lost_ = 0;
  double clamped_ = 0;
};

FiniteMeasure add(const FiniteMeasure& a, const FiniteMeasure& b);
FiniteMeasure scale(double lambda, const FiniteMeasure& a);
// Cone order: a <= b iff b - a exists, i.e. pointwise comparison.
bool leq(const FiniteMeasure& a, const FiniteMeasure& b, double tol = 0.0);
// Partial subtraction a - b, defined only when b <= a.
FiniteMeasure sub(const FiniteMeasure& a, const FiniteMeasure& b);
// Largest pointwise gap max_p |a{p} - b{p}| (for convergence tests).
double max_pointwise_diff(const FiniteMeasure& a, const FiniteMeasure& b);

// nu(V) = mu(phi^-1 V). phi maps point indices; returning nullopt drops the
// atom's mass into `lost`.
FiniteMeasure pushforward(const std::function<std::optional<int>(int)>& phi,
                          const FiniteMeasure& mu, const Space& target);
// phi on real values; defined for grid or numeric-labeled sources, target
// must be a grid. Non-finite or undefined values drop mass; out-of-range
// values clamp to the boundary bin.
FiniteMeasure pushforward_real(
    const std::function<std::optional<double>(double)>& phi,
    const FiniteMeasure& mu, const Space& target_grid);

FiniteMeasure product_measure(const FiniteMeasure& mu, const FiniteMeasure& nu);

// Pushforward of a binary real operation over the independent product:
// with op = +, this is convolution.
FiniteMeasure binop_pushforward(
    const std::function<std::optional<double>(double, double)>& op,
    const FiniteMeasure& mu, const FiniteMeasure& nu, const Space& target_grid);

// A bounded family of cone values indexed by the points of a space.
template <class C>
struct Path {
  Space space;
  std::vector<C> values;  // dense, indexed by point

  Path(const Space& s, std::vector<C> v) : space(s), values(std::move(v)) {
    if (static_cast<int>(values.size()) != s.size())
      throw structural_error("path must assign a value to every point");
  }
};

template <class C>
Path<C> make_path(const Space& s, const std::function<C(int)>& f) {
  std::vector<C> vals;
  vals.reserve(s.size());
  for (int i = 0; i < s.size(); ++i) vals.push_back(f(i));
  return Path<C>(s, vals);
}

namespace detail {
inline double cone_scale(double l, double x) { return l * x; }
inline double cone_add(double a, double b) { return a + b; }
inline double cone_zero_like(double) { return 0.0; }
inline FiniteMeasure cone_scale(double l, const FiniteMeasure& x) {
  return scale(l, x);
}
inline FiniteMeasure cone_add(const FiniteMeasure& a, const FiniteMeasure& b) {
  return add(a, b);
}
inline FiniteMeasure cone_zero_like(const FiniteMeasure& x) {
  return FiniteMeasure::zero(x.space());
}
}  // namespace detail

// Integral of a path against a measure: sum_r mu{r} * beta(r), taken over
// atoms in ascending point order through the fixed pairwise tree. Bilinear
// in (beta, mu); norm of the result is at most ||beta||_sup * ||mu||.
template <class C>
C integrate_path(const Path<C>& beta, const FiniteMeasure& mu) {
  require_same_space(beta.space, mu.space(), "integrate_path");
  using detail::cone_add;
  using detail::cone_scale;
  using detail::cone_zero_like;
  std::vector<C> terms;
  terms.reserve(mu.atoms().size());
  for (const auto& [point, m] : mu.atoms())
    terms.push_back(cone_scale(m, beta.values[point]));
  C zero = cone_zero_like(beta.values[0]);
  return pairwise_reduce(terms, zero,
                         [](const C& a, const C& b) { return cone_add(a, b); });
}

// Index currying: a path over X of paths over Y collapses to a path over
// X x Y with eta(x)(y) at the paired index.
template <class C>
Path<C> flatten_path(const Path<Path<C>>& eta) {
  Space prod = Space::product(eta.space, eta.values[0].space);
  std::vector<C> vals;
  vals.reserve(prod.size());
  for (int i = 0; i < eta.space.size(); ++i) {
    require_same_space(eta.values[i].space, eta.values[0].space,
                       "flatten_path");
    for (int j = 0; j < eta.values[i].space.size(); ++j)
      vals.push_back(eta.values[i].values[j]);
  }
  return Path<C>(prod, vals);
}

// A measure-valued map: one row per source point. Substochastic iff every
// row has total mass <= 1; composes like a stochastic matrix product.
class Kernel {
 public:
  Kernel(const Space& source, const Space& target,
         std::vector<FiniteMeasure> rows);

  static Kernel dirac(const Space& s);
  // rows[i][j] = mass sent from source point i to target point j.
  static Kernel from_matrix(const Space& source, const Space& target,
                            const std::vector<std::vector<double>>& rows);

  const Space& source() const { return source_; }
  const Space& target() const { return target_; }
  const FiniteMeasure& row(int i) const { return rows_.at(i); }
  double sup_row_mass() const;
  bool substochastic(double tol = 1e-12) const;

 private:
  Space source_, target_;
  std::vector<FiniteMeasure> rows_;
};

// kappa^(mu) = sum_x mu{x} * kappa(x).
FiniteMeasure kernel_apply(const Kernel& kappa, const FiniteMeasure& mu);
// Row r of the result is k2 applied to row r of k1.
Kernel kernel_compose(const Kernel& k2, const Kernel& k1);

}  // namespace cones
