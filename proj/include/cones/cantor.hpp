#pragma once

#include <map>
#include <string>
#include <vector>

#include "cones/measure.hpp"

namespace cones {

// Vector over the depth-truncated binary-tree web: coefficients indexed
// by binary strings of length <= depth, missing entries read as 0.
class TreeVector {
 public:
  TreeVector(int depth, std::map<std::string, double> coeffs);
  static TreeVector zero(int depth);
  // x_s = 2^{-|s|}: the fair-coin vector.
  static TreeVector coin_flip(int depth);

  int depth() const { return depth_; }
  const std::map<std::string, double>& coeffs() const { return coeffs_; }
  double at(const std::string& s) const;
  TreeVector with_entry(const std::string& s, double v) const;

 private:
  int depth_;
  std::map<std::string, double> coeffs_;
};

TreeVector tree_add(const TreeVector& a, const TreeVector& b);
TreeVector tree_scale(const TreeVector& a, double s);
double tree_max_diff(const TreeVector& a, const TreeVector& b);

// x_s = x_{s0} + x_{s1} for every string shorter than the depth.
bool is_additive(const TreeVector& x, double tol = 1e-12);

// Exact sup over antichains of the truncated web, by the dynamic program
// best(s) = max(x_s, best(s0) + best(s1)).
double antichain_norm(const TreeVector& x);

// (theta x)_t = x_{t0} + x_{t1}; additive vectors are exactly the ones
// theta fixes on strings shorter than the depth.
TreeVector theta_apply(const TreeVector& x);

// Binary-string labelled space with 2^depth atoms (the depth-d clopens).
Space cantor_leaf_space(int depth);

// Additive vector -> leaf measure, and its inverse (leaves copied, inner
// nodes rebuilt bottom-up so round trips are bit-exact).
FiniteMeasure to_measure(const TreeVector& x);
TreeVector from_measure(const FiniteMeasure& mu, int depth);

}  // namespace cones
