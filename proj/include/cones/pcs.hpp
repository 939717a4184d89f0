#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cones/multiset.hpp"

namespace cones {

// Probabilistic coherence space with a finite web.  Both a test family
// (cutting out the unit ball: <x,t> <= 1 for all t) and a generator
// family (distinguished ball members covering every atom) are carried,
// with orth swapping the two roles.  `exact` records whether the test
// family computes the norm exactly or only certifies a lower bound
// (tensor and bang duals contain non-simple elements).
class Pcs {
 public:
  enum class Kind { atomic, one, bot, with_, plus, orth, tensor, limpl, bang };

  static Pcs atomic(std::string name, std::vector<std::string> web,
                    std::vector<std::vector<double>> tests,
                    std::vector<std::vector<double>> gens, bool exact);
  static Pcs one();
  static Pcs bot();
  static Pcs with(const Pcs& x, const Pcs& y);
  static Pcs plus(const Pcs& x, const Pcs& y);
  static Pcs orth(const Pcs& x);
  static Pcs tensor(const Pcs& x, const Pcs& y);
  static Pcs limpl(const Pcs& x, const Pcs& y);
  // Truncated exponential over multisets of web atoms of size <= degree;
  // extraPromotions adds seeded promoted convex combinations of gens.
  static Pcs bang(const Pcs& x, int degree = 6, int extraPromotions = 0,
                  std::uint64_t seed = 0);

  // Stock spaces: length-(k+1) web with l1 ball (snat), linf ball
  // (orth_snat), and the two-point coproduct 1 (+) 1 (boolean).
  static Pcs snat(int k);
  static Pcs orth_snat(int k);
  static Pcs boolean();

  Kind kind() const;
  const std::string& name() const;
  int web_size() const;
  const std::vector<std::string>& web() const;
  const std::vector<std::vector<double>>& tests() const;
  const std::vector<std::vector<double>>& gens() const;
  bool exact() const;

  bool has_left() const;
  Pcs left() const;   // first child (or the only child for orth/bang)
  Pcs right() const;  // second child
  int bang_degree() const;
  const std::vector<Multiset>& bang_multisets() const;
  int bang_multiset_index(const Multiset& m) const;  // -1 when absent

  bool same_web(const Pcs& other) const;
  std::string describe() const;

  // Average of gens (always strictly positive on every atom).
  std::vector<double> avg_gen() const;

 private:
  struct Data;
  explicit Pcs(std::shared_ptr<const Data> d);
  std::shared_ptr<const Data> d_;
};

class PcsVector {
 public:
  PcsVector(Pcs pcs, std::vector<double> coeffs);
  static PcsVector zero(const Pcs& pcs);
  static PcsVector basis(const Pcs& pcs, int atom);

  const Pcs& pcs() const { return pcs_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double operator[](int atom) const { return coeffs_[atom]; }

 private:
  Pcs pcs_;
  std::vector<double> coeffs_;
};

struct NormResult {
  double lower = 0.0;    // max over tests, always valid
  double upper = 0.0;    // equals lower when exact; may be +inf
  bool exact = false;
};

double pairing(const std::vector<double>& x, const std::vector<double>& t);
bool membership(const PcsVector& x, double tol = 1e-9);
NormResult norm(const PcsVector& x);

PcsVector vec_add(const PcsVector& a, const PcsVector& b);
PcsVector vec_scale(const PcsVector& a, double s);

class PcsMatrix {
 public:
  // Dense entries indexed (sourceAtom, targetAtom).
  PcsMatrix(Pcs source, Pcs target, std::vector<std::vector<double>> entries);
  static PcsMatrix identity(const Pcs& p);
  static PcsMatrix zero(const Pcs& source, const Pcs& target);

  const Pcs& source() const { return source_; }
  const Pcs& target() const { return target_; }
  double entry(int a, int b) const { return entries_[a][b]; }
  const std::vector<std::vector<double>>& entries() const { return entries_; }

 private:
  Pcs source_;
  Pcs target_;
  std::vector<std::vector<double>> entries_;
};

PcsVector mat_apply(const PcsMatrix& t, const PcsVector& x);
// Diagrammatic composition: mat_compose(t2, t1) maps x to t2.(t1.x).
PcsMatrix mat_compose(const PcsMatrix& t2, const PcsMatrix& t1);
bool is_morphism(const PcsMatrix& t, double tol = 1e-9);
// Max over source gens of the (lower-bound) norm of the image.
double mat_norm_estimate(const PcsMatrix& t);

// x^! on bang(pcs(x), degree): coefficient x^m at each multiset m.
PcsVector promote(const PcsVector& x, int degree);

// Direct polynomial evaluation of a matrix whose source is a bang:
// out_b = sum_m t_{m,b} x^m; agrees with mat_apply(t, promote(x, d)).
PcsVector power_series_apply(const PcsMatrix& t, const PcsVector& x);

// Convolution monoid on a length-(webSize) nat-web: (a*b)_k = sum a_i b_{k-i},
// truncated to the web.
std::vector<double> nat_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b, int webSize);

// Matrix of the series u |-> sum_n a_n u^{*n} on snat(webSize-1), with
// coefficient t_{m,b} = (|m|!/m!) a_{|m| + coeffIndexOffset} [sum m = b].
// Offset 0 is the convolution-correct indexing; offset 1 is kept so the
// off-by-one variant can be exhibited against the oracle.
PcsMatrix convolution_series_matrix(int webSize, const std::vector<double>& a,
                                    int degree, int coeffIndexOffset = 0);

}  // namespace cones
