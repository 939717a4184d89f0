#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cones/ball.hpp"

namespace cones {

using RealFn = std::function<double(const std::vector<double>&)>;

// Signed parity sums of the order-n iterated difference of f at x along
// displacements us: plus collects subsets whose complement has even size,
// minus the odd ones; delta = plus - minus is the iterated difference.
struct FdiffResult {
  double plus = 0.0;
  double minus = 0.0;
  double delta() const { return plus - minus; }
};

FdiffResult fdiff(const RealFn& f, const std::vector<std::vector<double>>& us,
                  const std::vector<double>& x, const Ball& ball);
// Convenience overload against the unit cube of x's dimension.
FdiffResult fdiff(const RealFn& f, const std::vector<std::vector<double>>& us,
                  const std::vector<double>& x);

struct TotMonWitness {
  int order = 0;
  int sample = 0;
  std::vector<double> x;
  std::vector<std::vector<double>> us;
  double plus = 0.0;
  double minus = 0.0;
  std::string describe() const;
};

struct TotMonReport {
  bool pass = true;
  int ordersChecked = 0;
  int samplesPerOrder = 0;
  TotMonWitness witness;  // meaningful only when !pass
};

// Draws seeded admissible (x, us) tuples inside the ball for each order
// 1..maxOrder and checks minus <= plus + tol; stops at the first witness.
TotMonReport check_total_monotone(const RealFn& f, const Ball& ball,
                                  int maxOrder, int samples,
                                  std::uint64_t seed, double tol = 1e-10);

}  // namespace cones
