#include "cones/totmon.hpp"

#include <cmath>
#include <sstream>

namespace cones {

FdiffResult fdiff(const RealFn& f, const std::vector<std::vector<double>>& us,
                  const std::vector<double>& x, const Ball& ball) {
  const int n = static_cast<int>(us.size());
  if (n > 30) throw structural_error("fdiff: order too large");
  std::vector<double> top = x;
  for (const auto& u : us) {
    if (u.size() != x.size())
      throw structural_error("fdiff: displacement dimension mismatch");
    for (std::size_t i = 0; i < top.size(); ++i) top[i] += u[i];
  }
  if (!ball.contains(top, 1e-9))
    throw order_error("fdiff: x plus total displacement leaves the ball");

  FdiffResult r;
  std::vector<double> point(x.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    point = x;
    int bits = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        for (std::size_t j = 0; j < point.size(); ++j) point[j] += us[i][j];
        ++bits;
      }
    double v = f(point);
    if ((n - bits) % 2 == 0)
      r.plus += v;
    else
      r.minus += v;
  }
  return r;
}

FdiffResult fdiff(const RealFn& f, const std::vector<std::vector<double>>& us,
                  const std::vector<double>& x) {
  return fdiff(f, us, x, Ball::cube(static_cast<int>(x.size())));
}

std::string TotMonWitness::describe() const {
  std::ostringstream os;
  os << "order " << order << " sample " << sample << ": delta = "
     << (plus - minus) << " (plus " << plus << ", minus " << minus << ") at x=(";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

TotMonReport check_total_monotone(const RealFn& f, const Ball& ball,
                                  int maxOrder, int samples,
                                  std::uint64_t seed, double tol) {
  TotMonReport report;
  report.ordersChecked = maxOrder;
  report.samplesPerOrder = samples;
  const int d = ball.dim();
  for (int order = 1; order <= maxOrder; ++order) {
    RngStream rng(seed, static_cast<std::uint64_t>(order));
    for (int s = 0; s < samples; ++s) {
      std::vector<double> x =
          ball.sample_point(rng, 0.85 * rng.uniform());
      std::vector<std::vector<double>> us(order, std::vector<double>(d));
      std::vector<double> total(d, 0.0);
      for (auto& u : us)
        for (int j = 0; j < d; ++j) {
          u[j] = rng.uniform();
          total[j] += u[j];
        }
      double lam = ball.lambda_sup(x, total);
      if (!(lam > 0.0)) continue;
      if (std::isinf(lam)) lam = 1.0;
      double scale = 0.999 * lam * rng.uniform();
      for (auto& u : us)
        for (double& v : u) v *= scale;
      FdiffResult r = fdiff(f, us, x, ball);
      if (r.minus > r.plus + tol) {
        report.pass = false;
        report.witness = {order, s, std::move(x), std::move(us), r.plus,
                          r.minus};
        return report;
      }
    }
  }
  return report;
}

}  // namespace cones
