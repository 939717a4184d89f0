#pragma once

#include <functional>
#include <vector>

#include "cones/common.hpp"

namespace cones {

// Unit ball of a finite-dimensional cone R^d_+, cut out by linear
// constraints <x,t> <= 1 with t >= 0.  Covers the simplex (one all-ones
// constraint), the cube (coordinate constraints) and test-family balls.
class Ball {
 public:
  Ball(int dim, std::vector<std::vector<double>> constraints,
       std::vector<std::vector<double>> vertices);

  static Ball simplex(int dim);
  static Ball cube(int dim);

  int dim() const { return dim_; }
  const std::vector<std::vector<double>>& constraints() const {
    return constraints_;
  }
  const std::vector<std::vector<double>>& vertices() const { return vertices_; }

  // Minkowski gauge: max over constraints of <x,t>.  contains(x) iff <= 1.
  double gauge(const std::vector<double>& x) const;
  bool contains(const std::vector<double>& x, double tol = 1e-12) const;

  // sup { lambda >= 0 : x + lambda*u stays in the ball }; +inf when u
  // points along no active constraint (in particular u = 0).
  double lambda_sup(const std::vector<double>& x,
                    const std::vector<double>& u) const;

  // Deterministic low-discrepancy points on the gauge-1 boundary
  // (Halton directions scaled to the boundary).
  std::vector<std::vector<double>> face_points(int count) const;

  // Seeded interior point with gauge ~= fill (0 <= fill < 1).
  std::vector<double> sample_point(RngStream& rng, double fill) const;

 private:
  int dim_;
  std::vector<std::vector<double>> constraints_;
  std::vector<std::vector<double>> vertices_;

  void check_vector(const std::vector<double>& x, const char* what) const;
};

// Local cone at a basepoint: displacements u with x + lambda*u still in
// the ball for some lambda > 0, carrying the gauge N(u) = 1/sup(lambda).
class LocalCone {
 public:
  LocalCone(Ball ball, std::vector<double> base);

  const Ball& ball() const { return ball_; }
  const std::vector<double>& base() const { return base_; }

  // N(u) = 1 / lambda_sup(base, u); N(0) = 0, and base + u/N(u) lies in
  // the ambient ball whenever u != 0 with finite gauge.
  double gauge(const std::vector<double>& u) const;

 private:
  Ball ball_;
  std::vector<double> base_;
};

// d-dimensional Halton point (prime bases), index >= 1.
std::vector<double> halton_point(int dim, int index);

// Lower bound for sup_{ball} f: max over all vertices plus `facePoints`
// boundary points.
double sampled_sup(const Ball& ball, int facePoints,
                   const std::function<double(const std::vector<double>&)>& f);

}  // namespace cones
