#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cones/ball.hpp"

namespace cones {

struct FixpointTraceRow {
  long iteration;
  double norm;   // gauge of the iterate
  double delta;  // gauge of the increment from the previous iterate
};

struct FixpointResult {
  std::vector<double> value;
  long iterations = 0;
  bool converged = false;
  std::vector<FixpointTraceRow> trace;
};

// Kleene iteration from 0: x_{n+1} = f(x_n), stopping once the increment
// gauge drops to tol or maxIter is reached (reported, not an error).
// Iterates must stay in the ball and grow monotonically; violations throw
// contract_error with a witness message.
inline FixpointResult kleene_fixpoint(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const Ball& ball, double tol = 1e-12, long maxIter = 1000000,
    bool keepTrace = true) {
  FixpointResult out;
  std::vector<double> x(ball.dim(), 0.0);
  for (long k = 1; k <= maxIter; ++k) {
    std::vector<double> next = f(x);
    if (static_cast<int>(next.size()) != ball.dim())
      throw structural_error("kleene_fixpoint: map changed dimension");
    if (!ball.contains(next, 1e-9))
      throw contract_error("kleene_fixpoint: iterate " + std::to_string(k) +
                           " leaves the unit ball (gauge " +
                           std::to_string(ball.gauge(next)) + ")");
    std::vector<double> inc(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      inc[i] = next[i] - x[i];
      if (inc[i] < -1e-12)
        throw contract_error(
            "kleene_fixpoint: non-monotone step at iteration " +
            std::to_string(k) + ", coordinate " + std::to_string(i) +
            " decreased by " + std::to_string(-inc[i]));
      if (inc[i] < 0.0) inc[i] = 0.0;
    }
    double delta = ball.gauge(inc);
    x = std::move(next);
    out.iterations = k;
    if (keepTrace) out.trace.push_back({k, ball.gauge(x), delta});
    if (delta <= tol) {
      out.converged = true;
      break;
    }
  }
  out.value = std::move(x);
  return out;
}

// Scalar convenience on [0,1].
inline FixpointResult kleene_fixpoint1(const std::function<double(double)>& f,
                                       double tol = 1e-12,
                                       long maxIter = 1000000,
                                       bool keepTrace = true) {
  return kleene_fixpoint(
      [&f](const std::vector<double>& v) {
        return std::vector<double>{f(v[0])};
      },
      Ball::cube(1), tol, maxIter, keepTrace);
}

}  // namespace cones
