#include "cones/measure.hpp"

#include <cmath>
#include <iterator>

namespace cones {

FiniteMeasure FiniteMeasure::dirac(const Space& s, int point) {
  if (point < 0 || point >= s.size())
    throw structural_error("dirac: point outside space");
  FiniteMeasure m(s);
  m.mass_[point] = 1.0;
  return m;
}

FiniteMeasure FiniteMeasure::dirac_real(const Space& grid, double r) {
  bool clamped = false;
  int bin = grid.bin_of(r, clamped);
  FiniteMeasure m = dirac(grid, bin);
  if (clamped) m.set_clamped(1.0);
  return m;
}

FiniteMeasure FiniteMeasure::from_masses(const Space& s,
                                         const std::map<int, double>& masses) {
  FiniteMeasure m(s);
  for (const auto& [p, v] : masses) {
    if (p < 0 || p >= s.size())
      throw structural_error("from_masses: point outside space");
    if (v < 0) throw structural_error("from_masses: negative mass");
    m.accumulate(p, v);
  }
  m.prune();
  return m;
}

double FiniteMeasure::mass(int point) const {
  auto it = mass_.find(point);
  return it == mass_.end() ? 0.0 : it->second;
}

double FiniteMeasure::total() const {
  std::vector<double> vals;
  vals.reserve(mass_.size());
  for (const auto& [p, v] : mass_) vals.push_back(v);
  return pairwise_sum(vals);
}

void FiniteMeasure::accumulate(int point, double m) {
  if (m <= 0) return;
  mass_[point] += m;
}

void FiniteMeasure::prune() {
  double floor = prune_floor();
  for (auto it = mass_.begin(); it != mass_.end();)
    it = it->second < floor ? mass_.erase(it) : std::next(it);
}

FiniteMeasure add(const FiniteMeasure& a, const FiniteMeasure& b) {
  require_same_space(a.space(), b.space(), "add");
  FiniteMeasure out = a;
  for (const auto& [p, v] : b.atoms()) out.accumulate(p, v);
  out.prune();
  out.set_lost(a.lost() + b.lost());
  out.set_clamped(a.clamped() + b.clamped());
  return out;
}

FiniteMeasure scale(double lambda, const FiniteMeasure& a) {
  if (lambda < 0) throw structural_error("scale: negative scalar");
  FiniteMeasure out(a.space());
  if (lambda > 0)
    for (const auto& [p, v] : a.atoms()) out.accumulate(p, lambda * v);
  out.prune();
  out.set_lost(lambda * a.lost());
  out.set_clamped(lambda * a.clamped());
  return out;
}

bool leq(const FiniteMeasure& a, const FiniteMeasure& b, double tol) {
  if (a.space() != b.space()) return false;
  for (const auto& [p, v] : a.atoms())
    if (v > b.mass(p) + tol) return false;
  return true;
}

FiniteMeasure sub(const FiniteMeasure& a, const FiniteMeasure& b) {
  require_same_space(a.space(), b.space(), "sub");
  FiniteMeasure out(a.space());
  for (const auto& [p, v] : a.atoms()) {
    double d = v - b.mass(p);
    if (d < -prune_floor())
      throw order_error("sub: measures are not comparable at point " +
                        a.space().point_name(p));
    out.accumulate(p, d);
  }
  for (const auto& [p, v] : b.atoms())
    if (v > a.mass(p) + prune_floor())
      throw order_error("sub: measures are not comparable at point " +
                        a.space().point_name(p));
  out.prune();
  return out;
}

double max_pointwise_diff(const FiniteMeasure& a, const FiniteMeasure& b) {
  double worst = 0.0;
  for (const auto& [p, v] : a.atoms())
    worst = std::max(worst, std::abs(v - b.mass(p)));
  for (const auto& [p, v] : b.atoms())
    worst = std::max(worst, std::abs(v - a.mass(p)));
  return worst;
}

FiniteMeasure pushforward(const std::function<std::optional<int>(int)>& phi,
                          const FiniteMeasure& mu, const Space& target) {
  FiniteMeasure out(target);
  std::vector<double> dropped;
  for (const auto& [p, v] : mu.atoms()) {
    std::optional<int> q = phi(p);
    if (!q) {
      dropped.push_back(v);
      continue;
    }
    if (*q < 0 || *q >= target.size())
      throw structural_error("pushforward: image outside target space");
    out.accumulate(*q, v);
  }
  out.prune();
  out.set_lost(mu.lost() + pairwise_sum(dropped));
  out.set_clamped(mu.clamped());
  return out;
}

FiniteMeasure pushforward_real(
    const std::function<std::optional<double>(double)>& phi,
    const FiniteMeasure& mu, const Space& target_grid) {
  if (target_grid.kind() != Space::Kind::grid)
    throw structural_error("pushforward_real: target must be a grid");
  FiniteMeasure out(target_grid);
  std::vector<double> dropped, clamped;
  for (const auto& [p, v] : mu.atoms()) {
    std::optional<double> x = mu.space().numeric(p);
    if (!x)
      throw structural_error("pushforward_real: source point " +
                             mu.space().point_name(p) + " is not numeric");
    std::optional<double> y = phi(*x);
    if (!y || std::isnan(*y)) {
      dropped.push_back(v);
      continue;
    }
    bool clamp = false;
    int bin;
    if (std::isinf(*y)) {
      bin = *y > 0 ? target_grid.size() - 1 : 0;
      clamp = true;
    } else {
      bin = target_grid.bin_of(*y, clamp);
    }
    if (clamp) clamped.push_back(v);
    out.accumulate(bin, v);
  }
  out.prune();
  out.set_lost(mu.lost() + pairwise_sum(dropped));
  out.set_clamped(mu.clamped() + pairwise_sum(clamped));
  return out;
}

FiniteMeasure product_measure(const FiniteMeasure& mu,
                              const FiniteMeasure& nu) {
  Space prod = Space::product(mu.space(), nu.space());
  FiniteMeasure out(prod);
  for (const auto& [p, v] : mu.atoms())
    for (const auto& [q, w] : nu.atoms()) out.accumulate(prod.pair(p, q), v * w);
  // Pre-loss masses multiply, so the product's unseen mass is the
  // difference between the products with and without the losses.
  double ml = mu.lost(), nl = nu.lost();
  double lost = ml * nu.total() + mu.total() * nl + ml * nl;
  double mc = mu.clamped(), nc = nu.clamped();
  double clamped = mc * nu.total() + mu.total() * nc + mc * nc;
  out.prune();
  out.set_lost(lost);
  out.set_clamped(clamped);
  return out;
}

FiniteMeasure binop_pushforward(
    const std::function<std::optional<double>(double, double)>& op,
    const FiniteMeasure& mu, const FiniteMeasure& nu,
    const Space& target_grid) {
  FiniteMeasure prod = product_measure(mu, nu);
  const Space& ps = prod.space();
  if (target_grid.kind() == Space::Kind::grid) {
    FiniteMeasure out(target_grid);
    std::vector<double> dropped, clamped;
    for (const auto& [k, v] : prod.atoms()) {
      auto [p, q] = ps.unpair(k);
      std::optional<double> x = mu.space().numeric(p);
      std::optional<double> y = nu.space().numeric(q);
      if (!x || !y)
        throw structural_error("binop_pushforward: non-numeric operand point");
      std::optional<double> z = op(*x, *y);
      if (!z || std::isnan(*z)) {
        dropped.push_back(v);
        continue;
      }
      bool clamp = false;
      int bin;
      if (std::isinf(*z)) {
        bin = *z > 0 ? target_grid.size() - 1 : 0;
        clamp = true;
      } else {
        bin = target_grid.bin_of(*z, clamp);
      }
      if (clamp) clamped.push_back(v);
      out.accumulate(bin, v);
    }
    out.prune();
    out.set_lost(prod.lost() + pairwise_sum(dropped));
    out.set_clamped(prod.clamped() + pairwise_sum(clamped));
    return out;
  }
  if (target_grid.kind() == Space::Kind::discrete) {
    // Numeric-labeled discrete target: results must land exactly on a label.
    std::map<double, int> by_value;
    for (int i = 0; i < target_grid.size(); ++i) {
      std::optional<double> v = target_grid.numeric(i);
      if (!v)
        throw structural_error(
            "binop_pushforward: target labels must be numeric");
      by_value[*v] = i;
    }
    FiniteMeasure out(target_grid);
    std::vector<double> dropped;
    for (const auto& [k, v] : prod.atoms()) {
      auto [p, q] = ps.unpair(k);
      std::optional<double> x = mu.space().numeric(p);
      std::optional<double> y = nu.space().numeric(q);
      if (!x || !y)
        throw structural_error("binop_pushforward: non-numeric operand point");
      std::optional<double> z = op(*x, *y);
      if (!z || std::isnan(*z)) {
        dropped.push_back(v);
        continue;
      }
      auto it = by_value.find(*z);
      if (it == by_value.end()) {
        dropped.push_back(v);
        continue;
      }
      out.accumulate(it->second, v);
    }
    out.prune();
    out.set_lost(prod.lost() + pairwise_sum(dropped));
    out.set_clamped(prod.clamped());
    return out;
  }
  throw structural_error("binop_pushforward: unsupported target space");
}

Kernel::Kernel(const Space& source, const Space& target,
               std::vector<FiniteMeasure> rows)
    : source_(source), target_(target), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != source_.size())
    throw structural_error("kernel: one row per source point required");
  for (const FiniteMeasure& r : rows_)
    require_same_space(r.space(), target_, "kernel row");
}

Kernel Kernel::dirac(const Space& s) {
  std::vector<FiniteMeasure> rows;
  rows.reserve(s.size());
  for (int i = 0; i < s.size(); ++i) rows.push_back(FiniteMeasure::dirac(s, i));
  return Kernel(s, s, std::move(rows));
}

Kernel Kernel::from_matrix(const Space& source, const Space& target,
                           const std::vector<std::vector<double>>& rows) {
  if (static_cast<int>(rows.size()) != source.size())
    throw structural_error("from_matrix: one row per source point required");
  std::vector<FiniteMeasure> ms;
  ms.reserve(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != target.size())
      throw structural_error("from_matrix: row length must match target");
    FiniteMeasure m(target);
    for (int j = 0; j < target.size(); ++j) m.accumulate(j, row[j]);
    ms.push_back(std::move(m));
  }
  return Kernel(source, target, std::move(ms));
}

double Kernel::sup_row_mass() const {
  double sup = 0.0;
  for (const FiniteMeasure& r : rows_) sup = std::max(sup, r.total());
  return sup;
}

bool Kernel::substochastic(double tol) const {
  return sup_row_mass() <= 1.0 + tol;
}

FiniteMeasure kernel_apply(const Kernel& kappa, const FiniteMeasure& mu) {
  require_same_space(kappa.source(), mu.space(), "kernel_apply");
  std::vector<FiniteMeasure> rows;
  rows.reserve(kappa.source().size());
  for (int i = 0; i < kappa.source().size(); ++i) rows.push_back(kappa.row(i));
  return integrate_path(Path<FiniteMeasure>(kappa.source(), std::move(rows)),
                        mu);
}

Kernel kernel_compose(const Kernel& k2, const Kernel& k1) {
  require_same_space(k2.source(), k1.target(), "kernel_compose");
  std::vector<FiniteMeasure> rows;
  rows.reserve(k1.source().size());
  for (int i = 0; i < k1.source().size(); ++i)
    rows.push_back(kernel_apply(k2, k1.row(i)));
  return Kernel(k1.source(), k2.target(), std::move(rows));
}

}  // namespace cones
