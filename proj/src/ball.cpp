#include "cones/ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cones {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

const int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                       31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double radical_inverse(int base, int index) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

Ball::Ball(int dim, std::vector<std::vector<double>> constraints,
           std::vector<std::vector<double>> vertices)
    : dim_(dim),
      constraints_(std::move(constraints)),
      vertices_(std::move(vertices)) {
  if (dim_ < 0) throw structural_error("Ball: negative dimension");
  for (const auto& t : constraints_) check_vector(t, "constraint");
  for (const auto& v : vertices_) check_vector(v, "vertex");
}

Ball Ball::simplex(int dim) {
  std::vector<std::vector<double>> cs{std::vector<double>(dim, 1.0)};
  std::vector<std::vector<double>> vs{std::vector<double>(dim, 0.0)};
  for (int i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    vs.push_back(e);
  }
  return Ball(dim, std::move(cs), std::move(vs));
}

Ball Ball::cube(int dim) {
  std::vector<std::vector<double>> cs;
  for (int i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    cs.push_back(e);
  }
  std::vector<std::vector<double>> vs;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    std::vector<double> v(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      if (mask & (1 << i)) v[i] = 1.0;
    vs.push_back(v);
  }
  return Ball(dim, std::move(cs), std::move(vs));
}

void Ball::check_vector(const std::vector<double>& x, const char* what) const {
  if (static_cast<int>(x.size()) != dim_)
    throw structural_error(std::string("Ball: ") + what +
                           " has wrong dimension");
  for (double v : x)
    if (!(v >= 0.0))
      throw structural_error(std::string("Ball: ") + what +
                             " has a negative or NaN coordinate");
}

double Ball::gauge(const std::vector<double>& x) const {
  check_vector(x, "point");
  double g = 0.0;
  for (const auto& t : constraints_) g = std::max(g, dot(x, t));
  return g;
}

bool Ball::contains(const std::vector<double>& x, double tol) const {
  return gauge(x) <= 1.0 + tol;
}

double Ball::lambda_sup(const std::vector<double>& x,
                        const std::vector<double>& u) const {
  check_vector(x, "point");
  check_vector(u, "displacement");
  double lam = std::numeric_limits<double>::infinity();
  for (const auto& t : constraints_) {
    double du = dot(u, t);
    if (du <= 0.0) continue;
    lam = std::min(lam, (1.0 - dot(x, t)) / du);
  }
  return std::max(lam, 0.0);
}

std::vector<double> halton_point(int dim, int index) {
  if (dim > static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0])))
    throw structural_error("halton_point: dimension too large");
  std::vector<double> p(dim);
  for (int i = 0; i < dim; ++i) p[i] = radical_inverse(kPrimes[i], index);
  return p;
}

std::vector<std::vector<double>> Ball::face_points(int count) const {
  std::vector<std::vector<double>> out;
  if (dim_ == 0) return out;
  for (int i = 1; out.size() < static_cast<std::size_t>(count) &&
                  i <= 16 * count + 16;
       ++i) {
    std::vector<double> p = halton_point(dim_, i);
    double g = gauge(p);
    if (g <= 0.0) continue;  // unconstrained direction, nothing to scale to
    for (double& v : p) v /= g;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> Ball::sample_point(RngStream& rng, double fill) const {
  std::vector<double> p(dim_);
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (double& v : p) v = rng.uniform();
    double g = gauge(p);
    if (g > 0.0) {
      for (double& v : p) v *= fill / g;
      return p;
    }
  }
  // Unconstrained ball: every nonnegative point is inside.
  return p;
}

LocalCone::LocalCone(Ball ball, std::vector<double> base)
    : ball_(std::move(ball)), base_(std::move(base)) {
  if (!ball_.contains(base_))
    throw structural_error("LocalCone: basepoint outside the unit ball");
}

double LocalCone::gauge(const std::vector<double>& u) const {
  double lam = ball_.lambda_sup(base_, u);
  if (std::isinf(lam)) return 0.0;
  // lam == 0 with u != 0 means u is not in the local cone at all; its
  // gauge is +inf rather than an error.
  if (lam <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / lam;
}

double sampled_sup(const Ball& ball, int facePoints,
                   const std::function<double(const std::vector<double>&)>& f) {
  double best = 0.0;
  for (const auto& v : ball.vertices()) best = std::max(best, f(v));
  for (const auto& p : ball.face_points(facePoints))
    best = std::max(best, f(p));
  return best;
}

}  // namespace cones
