#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cones/common.hpp"

namespace cones {

// A finite measurable space. Three shapes:
//   - discrete: a finite list of labels,
//   - grid: a uniform discretization of [lo, hi] into bins, whose points
//     are the bin centers lo + (i + 0.5) * (hi - lo) / bins,
//   - product: pairs of points of two factor spaces.
// Points are identified by their index in [0, size()).
class Space {
 public:
  enum class Kind { discrete, grid, product };

  static Space discrete(std::vector<std::string> labels);
  static Space grid(double lo, double hi, int bins);
  static Space product(const Space& a, const Space& b);

  Kind kind() const { return d_->kind; }
  int size() const { return d_->size; }

  bool operator==(const Space& o) const;
  bool operator!=(const Space& o) const { return !(*this == o); }

  // Grid accessors.
  double lo() const;
  double hi() const;
  int bins() const;
  double width() const;
  double center(int i) const;
  // Index of the bin containing r; out-of-range reals clamp to the
  // boundary bin and set `clamped`.
  int bin_of(double r, bool& clamped) const;

  // Discrete accessors.
  const std::vector<std::string>& labels() const;

  // Product accessors.
  Space left() const;
  Space right() const;
  int pair(int i, int j) const;
  std::pair<int, int> unpair(int k) const;

  std::string point_name(int i) const;
  // Real value of a point: grid center, or a numeric label.
  std::optional<double> numeric(int i) const;

  std::string describe() const;

 private:
  struct Data {
    Kind kind;
    int size = 0;
    std::vector<std::string> labels;
    double lo = 0, hi = 0;
    int bins = 0;
    std::shared_ptr<const Data> a, b;
  };
  explicit Space(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  static bool same(const Data& x, const Data& y);

  std::shared_ptr<const Data> d_;
};

// Throws structural_error unless the two spaces are equal.
void require_same_space(const Space& a, const Space& b, const char* what);

}  // namespace cones
