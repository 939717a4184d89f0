#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cones {

// User-level problems: malformed data, mismatched spaces/webs, bad syntax.
struct structural_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Partial subtraction applied to an incomparable pair.
struct order_error : structural_error {
  using structural_error::structural_error;
};

// A broken internal assumption (iterate escaping the unit ball,
// a non-monotone fixpoint step, ...). CLI maps these to exit code 2.
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Masses below this floor are pruned after each measure operation.
double prune_floor();
void set_prune_floor(double floor);

std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic random stream. mt19937_64 is fully specified by the
// standard; the mapping to doubles is spelled out here (53-bit mantissa)
// instead of relying on std::uniform_real_distribution, whose algorithm
// is implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t bits() { return gen_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  int below(int n);

 private:
  std::mt19937_64 gen_;
};

// Fixed pairwise reduction tree over an already-ordered sequence:
// reduce(v) = reduce(v[0..n/2)) + reduce(v[n/2..n)). All sums in the
// library go through this so results do not depend on accumulation order.
double pairwise_sum(const std::vector<double>& xs);

template <class T, class Add>
T pairwise_reduce_range(const std::vector<T>& xs, std::size_t lo,
                        std::size_t hi, const Add& add) {
  if (hi - lo == 1) return xs[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return add(pairwise_reduce_range(xs, lo, mid, add),
             pairwise_reduce_range(xs, mid, hi, add));
}

template <class T, class Add>
T pairwise_reduce(const std::vector<T>& xs, T zero, const Add& add) {
  if (xs.empty()) return zero;
  return pairwise_reduce_range(xs, 0, xs.size(), add);
}

// FNV-1a, used for input digests in run reports.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

}  // namespace cones
