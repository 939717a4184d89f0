#include "cones/space.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace cones {

Space Space::discrete(std::vector<std::string> labels) {
  if (labels.empty())
    throw structural_error("discrete space needs at least one label");
  auto d = std::make_shared<Data>();
  d->kind = Kind::discrete;
  d->size = static_cast<int>(labels.size());
  d->labels = std::move(labels);
  return Space(d);
}

Space Space::grid(double lo, double hi, int bins) {
  if (!(lo < hi)) throw structural_error("grid needs lo < hi");
  if (bins < 1) throw structural_error("grid needs bins >= 1");
  auto d = std::make_shared<Data>();
  d->kind = Kind::grid;
  d->size = bins;
  d->lo = lo;
  d->hi = hi;
  d->bins = bins;
  return Space(d);
}

Space Space::product(const Space& a, const Space& b) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::product;
  d->size = a.size() * b.size();
  d->a = a.d_;
  d->b = b.d_;
  return Space(d);
}

bool Space::same(const Data& x, const Data& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::discrete:
      return x.labels == y.labels;
    case Kind::grid:
      return x.lo == y.lo && x.hi == y.hi && x.bins == y.bins;
    case Kind::product:
      return same(*x.a, *y.a) && same(*x.b, *y.b);
  }
  return false;
}

bool Space::operator==(const Space& o) const {
  return d_ == o.d_ || same(*d_, *o.d_);
}

double Space::lo() const {
  if (kind() != Kind::grid) throw structural_error("lo(): not a grid space");
  return d_->lo;
}

double Space::hi() const {
  if (kind() != Kind::grid) throw structural_error("hi(): not a grid space");
  return d_->hi;
}

int Space::bins() const {
  if (kind() != Kind::grid) throw structural_error("bins(): not a grid space");
  return d_->bins;
}

double Space::width() const { return (hi() - lo()) / bins(); }

double Space::center(int i) const {
  return lo() + (i + 0.5) * (hi() - lo()) / bins();
}

int Space::bin_of(double r, bool& clamped) const {
  clamped = false;
  if (kind() != Kind::grid) throw structural_error("bin_of(): not a grid space");
  if (std::isnan(r)) throw structural_error("bin_of(): NaN point");
  if (r < d_->lo) {
    clamped = true;
    return 0;
  }
  if (r >= d_->hi) {
    clamped = r > d_->hi;
    return d_->bins - 1;
  }
  int i = static_cast<int>(std::floor((r - d_->lo) / width()));
  if (i < 0) i = 0;
  if (i >= d_->bins) i = d_->bins - 1;
  return i;
}

const std::vector<std::string>& Space::labels() const {
  if (kind() != Kind::discrete)
    throw structural_error("labels(): not a discrete space");
  return d_->labels;
}

Space Space::left() const {
  if (kind() != Kind::product)
    throw structural_error("left(): not a product space");
  return Space(d_->a);
}

Space Space::right() const {
  if (kind() != Kind::product)
    throw structural_error("right(): not a product space");
  return Space(d_->b);
}

int Space::pair(int i, int j) const {
  if (kind() != Kind::product)
    throw structural_error("pair(): not a product space");
  return i * d_->b->size + j;
}

std::pair<int, int> Space::unpair(int k) const {
  if (kind() != Kind::product)
    throw structural_error("unpair(): not a product space");
  int n = d_->b->size;
  return {k / n, k % n};
}

std::string Space::point_name(int i) const {
  switch (kind()) {
    case Kind::discrete:
      return d_->labels[i];
    case Kind::grid: {
      std::ostringstream os;
      os << center(i);
      return os.str();
    }
    case Kind::product: {
      auto [a, b] = unpair(i);
      return "(" + Space(d_->a).point_name(a) + "," +
             Space(d_->b).point_name(b) + ")";
    }
  }
  return {};
}

std::optional<double> Space::numeric(int i) const {
  switch (kind()) {
    case Kind::grid:
      return center(i);
    case Kind::discrete: {
      const std::string& s = d_->labels[i];
      char* end = nullptr;
      double v = std::strtod(s.c_str(), &end);
      if (end && *end == '\0' && end != s.c_str()) return v;
      return std::nullopt;
    }
    case Kind::product:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Space::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::discrete:
      os << "discrete[" << size() << "]";
      break;
    case Kind::grid:
      os << "grid[" << d_->lo << "," << d_->hi << "]x" << d_->bins;
      break;
    case Kind::product:
      os << Space(d_->a).describe() << " x " << Space(d_->b).describe();
      break;
  }
  return os.str();
}

void require_same_space(const Space& a, const Space& b, const char* what) {
  if (a != b)
    throw structural_error(std::string(what) + ": space mismatch (" +
                           a.describe() + " vs " + b.describe() + ")");
}

}  // namespace cones
