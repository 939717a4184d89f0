#include "cones/pcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace cones {

struct Pcs::Data {
  Kind kind = Kind::atomic;
  std::string name;
  std::vector<std::string> web;
  std::vector<std::vector<double>> tests;
  std::vector<std::vector<double>> gens;
  bool exact = false;
  std::shared_ptr<const Data> left, right;
  int bangDegree = -1;
  std::vector<Multiset> bangMultisets;
};

namespace {

void validate_family(const std::vector<std::vector<double>>& fam,
                     std::size_t webSize, const char* who) {
  for (const auto& v : fam) {
    if (v.size() != webSize)
      throw structural_error(std::string(who) +
                             ": coefficient map size differs from web");
    for (double c : v)
      if (!(c >= 0.0) || !std::isfinite(c))
        throw structural_error(std::string(who) +
                               ": negative or non-finite coefficient");
  }
}

std::vector<double> concat_pad(const std::vector<double>& a, std::size_t na,
                               const std::vector<double>& b, std::size_t nb) {
  std::vector<double> out(na + nb, 0.0);
  std::copy(a.begin(), a.end(), out.begin());
  std::copy(b.begin(), b.end(), out.begin() + na);
  return out;
}

std::vector<double> outer(const std::vector<double>& a,
                          const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x * y);
  return out;
}

std::vector<double> family_average(
    const std::vector<std::vector<double>>& fam, std::size_t webSize) {
  std::vector<double> avg(webSize, 0.0);
  if (fam.empty()) return avg;
  for (const auto& v : fam)
    for (std::size_t i = 0; i < webSize; ++i) avg[i] += v[i];
  for (double& c : avg) c /= static_cast<double>(fam.size());
  return avg;
}

}  // namespace

Pcs::Pcs(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

Pcs Pcs::atomic(std::string name, std::vector<std::string> web,
                std::vector<std::vector<double>> tests,
                std::vector<std::vector<double>> gens, bool exact) {
  if (web.empty()) throw structural_error("Pcs: empty web");
  {
    std::set<std::string> seen(web.begin(), web.end());
    if (seen.size() != web.size())
      throw structural_error("Pcs: duplicate web atom labels");
  }
  validate_family(tests, web.size(), "Pcs tests");
  validate_family(gens, web.size(), "Pcs gens");
  for (std::size_t a = 0; a < web.size(); ++a) {
    bool genHit = false, testHit = false;
    for (const auto& g : gens) genHit = genHit || g[a] > 0.0;
    for (const auto& t : tests) testHit = testHit || t[a] > 0.0;
    if (!genHit || !testHit)
      throw structural_error("Pcs: atom " + web[a] +
                             " not covered by gens and tests");
  }
  for (const auto& g : gens)
    for (const auto& t : tests)
      if (pairing(g, t) > 1.0 + 1e-12)
        throw structural_error("Pcs: generator outside the test ball");
  auto d = std::make_shared<Data>();
  d->kind = Kind::atomic;
  d->name = std::move(name);
  d->web = std::move(web);
  d->tests = std::move(tests);
  d->gens = std::move(gens);
  d->exact = exact;
  return Pcs(std::move(d));
}

Pcs Pcs::one() {
  auto d = std::make_shared<Data>();
  d->kind = Kind::one;
  d->name = "one";
  d->web = {"*"};
  d->tests = {{1.0}};
  d->gens = {{1.0}};
  d->exact = true;
  return Pcs(std::move(d));
}

Pcs Pcs::bot() {
  auto d = std::make_shared<Data>();
  d->kind = Kind::bot;
  d->name = "bot";
  d->web = {"*"};
  d->tests = {{1.0}};
  d->gens = {{1.0}};
  d->exact = true;
  return Pcs(std::move(d));
}

Pcs Pcs::with(const Pcs& x, const Pcs& y) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::with_;
  d->name = "with(" + x.name() + "," + y.name() + ")";
  const std::size_t nx = x.web().size(), ny = y.web().size();
  for (const auto& a : x.web()) d->web.push_back("inl(" + a + ")");
  for (const auto& b : y.web()) d->web.push_back("inr(" + b + ")");
  std::vector<double> zx(nx, 0.0), zy(ny, 0.0);
  for (const auto& t : x.tests()) d->tests.push_back(concat_pad(t, nx, zy, ny));
  for (const auto& s : y.tests()) d->tests.push_back(concat_pad(zx, nx, s, ny));
  for (const auto& g : x.gens())
    for (const auto& h : y.gens()) d->gens.push_back(concat_pad(g, nx, h, ny));
  d->exact = x.exact() && y.exact();
  d->left = x.d_;
  d->right = y.d_;
  return Pcs(std::move(d));
}

Pcs Pcs::plus(const Pcs& x, const Pcs& y) {
  // Mechanically orth(with(orth x, orth y)): tests are all pairs of
  // component tests, gens are the two injections of component gens.
  auto d = std::make_shared<Data>();
  d->kind = Kind::plus;
  d->name = "plus(" + x.name() + "," + y.name() + ")";
  const std::size_t nx = x.web().size(), ny = y.web().size();
  for (const auto& a : x.web()) d->web.push_back("inl(" + a + ")");
  for (const auto& b : y.web()) d->web.push_back("inr(" + b + ")");
  std::vector<double> zx(nx, 0.0), zy(ny, 0.0);
  for (const auto& t : x.tests())
    for (const auto& s : y.tests()) d->tests.push_back(concat_pad(t, nx, s, ny));
  for (const auto& g : x.gens()) d->gens.push_back(concat_pad(g, nx, zy, ny));
  for (const auto& h : y.gens()) d->gens.push_back(concat_pad(zx, nx, h, ny));
  d->exact = x.exact() && y.exact();
  d->left = x.d_;
  d->right = y.d_;
  return Pcs(std::move(d));
}

Pcs Pcs::orth(const Pcs& x) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::orth;
  d->name = "orth(" + x.name() + ")";
  d->web = x.web();
  d->tests = x.gens();
  d->gens = x.tests();
  d->exact = x.exact();
  d->left = x.d_;
  return Pcs(std::move(d));
}

Pcs Pcs::tensor(const Pcs& x, const Pcs& y) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::tensor;
  d->name = "tensor(" + x.name() + "," + y.name() + ")";
  for (const auto& a : x.web())
    for (const auto& b : y.web()) d->web.push_back("(" + a + "," + b + ")");
  for (const auto& t : x.tests())
    for (const auto& s : y.tests()) d->tests.push_back(outer(t, s));
  for (const auto& g : x.gens())
    for (const auto& h : y.gens()) d->gens.push_back(outer(g, h));
  d->exact = false;  // the dual of a tensor contains non-simple tests
  d->left = x.d_;
  d->right = y.d_;
  return Pcs(std::move(d));
}

Pcs Pcs::limpl(const Pcs& x, const Pcs& y) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::limpl;
  d->name = "limpl(" + x.name() + "," + y.name() + ")";
  for (const auto& a : x.web())
    for (const auto& b : y.web()) d->web.push_back("(" + a + "," + b + ")");
  for (const auto& g : x.gens())
    for (const auto& t : y.tests()) d->tests.push_back(outer(g, t));
  for (const auto& t : x.tests())
    for (const auto& h : y.gens()) d->gens.push_back(outer(t, h));
  d->exact = x.exact() && y.exact();
  d->left = x.d_;
  d->right = y.d_;
  return Pcs(std::move(d));
}

Pcs Pcs::bang(const Pcs& x, int degree, int extraPromotions,
              std::uint64_t seed) {
  if (degree < 0) throw structural_error("Pcs::bang: negative degree");
  auto d = std::make_shared<Data>();
  d->kind = Kind::bang;
  d->name = "bang(" + x.name() + "," + std::to_string(degree) + ")";
  d->bangDegree = degree;
  const int n = x.web_size();
  d->bangMultisets = enumerate_multisets(n, degree);
  for (const auto& m : d->bangMultisets)
    d->web.push_back(ms_name(m, x.web()));

  auto promote_raw = [&](const std::vector<double>& g) {
    std::vector<double> out;
    out.reserve(d->bangMultisets.size());
    for (const auto& m : d->bangMultisets)
      out.push_back(monomial_eval(m, g));
    return out;
  };

  std::vector<double> avgGen = family_average(x.gens(), n);
  for (const auto& g : x.gens()) d->gens.push_back(promote_raw(g));
  d->gens.push_back(promote_raw(avgGen));
  RngStream rng(seed, 0x6261u /* "ba" */);
  for (int e = 0; e < extraPromotions; ++e) {
    std::vector<double> mix(n, 0.0);
    double wsum = 0.0;
    std::vector<double> w(x.gens().size());
    for (double& v : w) {
      v = rng.uniform();
      wsum += v;
    }
    if (wsum <= 0.0) continue;
    for (std::size_t i = 0; i < x.gens().size(); ++i)
      for (int a = 0; a < n; ++a) mix[a] += w[i] / wsum * x.gens()[i][a];
    double fill = rng.uniform();
    for (double& v : mix) v *= fill;
    d->gens.push_back(promote_raw(mix));
  }

  // Empty-multiset indicator plus the geometric dual family
  // T_m = (1-lambda) lambda^{|m|} (|m|!/m!) t^m, valid for any test t.
  {
    std::vector<double> ind(d->bangMultisets.size(), 0.0);
    ind[0] = 1.0;  // multisets enumerated by (size, lex): index 0 is empty
    d->tests.push_back(std::move(ind));
  }
  std::vector<double> avgTest = family_average(x.tests(), n);
  std::vector<std::vector<double>> baseTests = x.tests();
  baseTests.push_back(avgTest);
  std::vector<double> lambdas{0.5,
                              static_cast<double>(degree) / (degree + 1.0)};
  for (double lambda : lambdas) {
    if (lambda <= 0.0 || lambda >= 1.0) continue;
    for (const auto& t : baseTests) {
      std::vector<double> T;
      T.reserve(d->bangMultisets.size());
      for (const auto& m : d->bangMultisets)
        T.push_back((1.0 - lambda) * std::pow(lambda, ms_size(m)) *
                    ms_multinomial(m) * monomial_eval(m, t));
      d->tests.push_back(std::move(T));
    }
  }
  d->exact = false;
  d->left = x.d_;
  return Pcs(std::move(d));
}

Pcs Pcs::snat(int k) {
  if (k < 0) throw structural_error("Pcs::snat: negative truncation");
  std::vector<std::string> web;
  std::vector<std::vector<double>> tests, gens;
  for (int i = 0; i <= k; ++i) web.push_back(std::to_string(i));
  tests.push_back(std::vector<double>(k + 1, 1.0));
  for (int i = 0; i <= k; ++i) {
    std::vector<double> e(k + 1, 0.0);
    e[i] = 1.0;
    gens.push_back(std::move(e));
  }
  return atomic("snat(" + std::to_string(k) + ")", std::move(web),
                std::move(tests), std::move(gens), true);
}

Pcs Pcs::orth_snat(int k) {
  if (k < 0) throw structural_error("Pcs::orth_snat: negative truncation");
  std::vector<std::string> web;
  std::vector<std::vector<double>> tests, gens;
  for (int i = 0; i <= k; ++i) web.push_back(std::to_string(i));
  for (int i = 0; i <= k; ++i) {
    std::vector<double> e(k + 1, 0.0);
    e[i] = 1.0;
    tests.push_back(std::move(e));
  }
  gens.push_back(std::vector<double>(k + 1, 1.0));
  return atomic("orth_snat(" + std::to_string(k) + ")", std::move(web),
                std::move(tests), std::move(gens), true);
}

Pcs Pcs::boolean() { return plus(one(), one()); }

Pcs::Kind Pcs::kind() const { return d_->kind; }
const std::string& Pcs::name() const { return d_->name; }
int Pcs::web_size() const { return static_cast<int>(d_->web.size()); }
const std::vector<std::string>& Pcs::web() const { return d_->web; }
const std::vector<std::vector<double>>& Pcs::tests() const {
  return d_->tests;
}
const std::vector<std::vector<double>>& Pcs::gens() const { return d_->gens; }
bool Pcs::exact() const { return d_->exact; }

bool Pcs::has_left() const { return d_->left != nullptr; }
Pcs Pcs::left() const {
  if (!d_->left) throw structural_error("Pcs: no child space");
  return Pcs(d_->left);
}
Pcs Pcs::right() const {
  if (!d_->right) throw structural_error("Pcs: no second child space");
  return Pcs(d_->right);
}
int Pcs::bang_degree() const { return d_->bangDegree; }
const std::vector<Multiset>& Pcs::bang_multisets() const {
  if (d_->kind != Kind::bang)
    throw structural_error("Pcs: not an exponential space");
  return d_->bangMultisets;
}

int Pcs::bang_multiset_index(const Multiset& m) const {
  const auto& ms = bang_multisets();
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (ms[i] == m) return static_cast<int>(i);
  return -1;
}

bool Pcs::same_web(const Pcs& other) const { return d_->web == other.d_->web; }

std::string Pcs::describe() const {
  return d_->name + " [web " + std::to_string(web_size()) + ", " +
         std::to_string(d_->tests.size()) + " tests, " +
         std::to_string(d_->gens.size()) + " gens, " +
         (d_->exact ? "exact" : "lower-bound") + " norm]";
}

std::vector<double> Pcs::avg_gen() const {
  return family_average(d_->gens, d_->web.size());
}

PcsVector::PcsVector(Pcs pcs, std::vector<double> coeffs)
    : pcs_(std::move(pcs)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != pcs_.web_size())
    throw structural_error("PcsVector: coefficient vector size differs from web");
  for (double c : coeffs_)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw structural_error("PcsVector: negative or non-finite coefficient");
}

PcsVector PcsVector::zero(const Pcs& pcs) {
  return PcsVector(pcs, std::vector<double>(pcs.web_size(), 0.0));
}

PcsVector PcsVector::basis(const Pcs& pcs, int atom) {
  if (atom < 0 || atom >= pcs.web_size())
    throw structural_error("PcsVector: atom outside web");
  std::vector<double> c(pcs.web_size(), 0.0);
  c[atom] = 1.0;
  return PcsVector(pcs, std::move(c));
}

double pairing(const std::vector<double>& x, const std::vector<double>& t) {
  if (x.size() != t.size())
    throw structural_error("pairing: size mismatch");
  std::vector<double> terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) terms[i] = x[i] * t[i];
  return pairwise_sum(terms);
}

bool membership(const PcsVector& x, double tol) {
  for (const auto& t : x.pcs().tests())
    if (pairing(x.coeffs(), t) > 1.0 + tol) return false;
  return true;
}

namespace {

double tests_max(const Pcs& p, const std::vector<double>& coeffs) {
  double best = 0.0;
  for (const auto& t : p.tests())
    best = std::max(best, pairing(coeffs, t));
  return best;
}

double norm_upper_rec(const Pcs& p, const std::vector<double>& coeffs);

double basis_upper(const Pcs& p, int atom) {
  std::vector<double> e(p.web_size(), 0.0);
  e[atom] = 1.0;
  return norm_upper_rec(p, e);
}

double norm_upper_rec(const Pcs& p, const std::vector<double>& coeffs) {
  if (p.exact()) return tests_max(p, coeffs);
  const double inf = std::numeric_limits<double>::infinity();
  switch (p.kind()) {
    case Pcs::Kind::with_:
    case Pcs::Kind::plus: {
      Pcs l = p.left(), r = p.right();
      std::vector<double> cl(coeffs.begin(), coeffs.begin() + l.web_size());
      std::vector<double> cr(coeffs.begin() + l.web_size(), coeffs.end());
      double ul = norm_upper_rec(l, cl), ur = norm_upper_rec(r, cr);
      return p.kind() == Pcs::Kind::with_ ? std::max(ul, ur) : ul + ur;
    }
    case Pcs::Kind::tensor: {
      // l1 decomposition along left atoms: sum_a |e_a| * |row_a|.
      Pcs l = p.left(), r = p.right();
      double total = 0.0;
      for (int a = 0; a < l.web_size(); ++a) {
        std::vector<double> row(coeffs.begin() + a * r.web_size(),
                                coeffs.begin() + (a + 1) * r.web_size());
        bool nonzero = false;
        for (double c : row) nonzero = nonzero || c > 0.0;
        if (!nonzero) continue;
        total += basis_upper(l, a) * norm_upper_rec(r, row);
      }
      return total;
    }
    case Pcs::Kind::bang: {
      // |e_m| <= 1/g^m for any ball member g; take the best known g.
      Pcs child = p.left();
      std::vector<std::vector<double>> cands = child.gens();
      cands.push_back(child.avg_gen());
      double total = 0.0;
      const auto& ms = p.bang_multisets();
      for (std::size_t i = 0; i < ms.size(); ++i) {
        if (coeffs[i] <= 0.0) continue;
        double best = 0.0;
        for (const auto& g : cands)
          best = std::max(best, monomial_eval(ms[i], g));
        if (best <= 0.0) return inf;
        total += coeffs[i] / best;
      }
      return total;
    }
    default:
      return inf;
  }
}

}  // namespace

NormResult norm(const PcsVector& x) {
  NormResult r;
  r.lower = tests_max(x.pcs(), x.coeffs());
  r.exact = x.pcs().exact();
  // The decomposition bound can land an ulp below the test maximum when
  // the two coincide; keep the interval well-formed.
  r.upper = r.exact ? r.lower
                    : std::max(norm_upper_rec(x.pcs(), x.coeffs()), r.lower);
  return r;
}

PcsVector vec_add(const PcsVector& a, const PcsVector& b) {
  if (!a.pcs().same_web(b.pcs()))
    throw structural_error("vec_add: web mismatch");
  std::vector<double> c = a.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs()[i];
  return PcsVector(a.pcs(), std::move(c));
}

PcsVector vec_scale(const PcsVector& a, double s) {
  if (s < 0.0) throw structural_error("vec_scale: negative scalar");
  std::vector<double> c = a.coeffs();
  for (double& v : c) v *= s;
  return PcsVector(a.pcs(), std::move(c));
}

PcsMatrix::PcsMatrix(Pcs source, Pcs target,
                     std::vector<std::vector<double>> entries)
    : source_(std::move(source)),
      target_(std::move(target)),
      entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != source_.web_size())
    throw structural_error("PcsMatrix: row count differs from source web");
  for (const auto& row : entries_) {
    if (static_cast<int>(row.size()) != target_.web_size())
      throw structural_error("PcsMatrix: row size differs from target web");
    for (double c : row)
      if (!(c >= 0.0) || !std::isfinite(c))
        throw structural_error("PcsMatrix: negative or non-finite entry");
  }
}

PcsMatrix PcsMatrix::identity(const Pcs& p) {
  std::vector<std::vector<double>> e(
      p.web_size(), std::vector<double>(p.web_size(), 0.0));
  for (int i = 0; i < p.web_size(); ++i) e[i][i] = 1.0;
  return PcsMatrix(p, p, std::move(e));
}

PcsMatrix PcsMatrix::zero(const Pcs& source, const Pcs& target) {
  std::vector<std::vector<double>> e(
      source.web_size(), std::vector<double>(target.web_size(), 0.0));
  return PcsMatrix(source, target, std::move(e));
}

PcsVector mat_apply(const PcsMatrix& t, const PcsVector& x) {
  if (!t.source().same_web(x.pcs()))
    throw structural_error("mat_apply: web mismatch");
  const int nb = t.target().web_size();
  const int na = t.source().web_size();
  std::vector<double> out(nb, 0.0);
  std::vector<double> terms(na);
  for (int b = 0; b < nb; ++b) {
    for (int a = 0; a < na; ++a) terms[a] = t.entry(a, b) * x.coeffs()[a];
    out[b] = pairwise_sum(terms);
  }
  return PcsVector(t.target(), std::move(out));
}

PcsMatrix mat_compose(const PcsMatrix& t2, const PcsMatrix& t1) {
  if (!t1.target().same_web(t2.source()))
    throw structural_error("mat_compose: middle web mismatch");
  const int na = t1.source().web_size();
  const int nb = t1.target().web_size();
  const int nc = t2.target().web_size();
  std::vector<std::vector<double>> out(na, std::vector<double>(nc, 0.0));
  std::vector<double> terms(nb);
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < nc; ++c) {
      for (int b = 0; b < nb; ++b) terms[b] = t1.entry(a, b) * t2.entry(b, c);
      out[a][c] = pairwise_sum(terms);
    }
  return PcsMatrix(t1.source(), t2.target(), std::move(out));
}

bool is_morphism(const PcsMatrix& t, double tol) {
  for (const auto& g : t.source().gens()) {
    PcsVector img = mat_apply(t, PcsVector(t.source(), g));
    if (!membership(img, tol)) return false;
  }
  return true;
}

double mat_norm_estimate(const PcsMatrix& t) {
  double best = 0.0;
  for (const auto& g : t.source().gens()) {
    PcsVector img = mat_apply(t, PcsVector(t.source(), g));
    best = std::max(best, norm(img).lower);
  }
  return best;
}

PcsVector promote(const PcsVector& x, int degree) {
  Pcs bang = Pcs::bang(x.pcs(), degree);
  std::vector<double> out;
  out.reserve(bang.bang_multisets().size());
  for (const auto& m : bang.bang_multisets())
    out.push_back(monomial_eval(m, x.coeffs()));
  return PcsVector(std::move(bang), std::move(out));
}

PcsVector power_series_apply(const PcsMatrix& t, const PcsVector& x) {
  if (t.source().kind() != Pcs::Kind::bang)
    throw structural_error("power_series_apply: source is not an exponential");
  if (!t.source().left().same_web(x.pcs()))
    throw structural_error("power_series_apply: web mismatch");
  const auto& ms = t.source().bang_multisets();
  const int nb = t.target().web_size();
  std::vector<double> out(nb, 0.0);
  std::vector<double> terms(ms.size());
  for (int b = 0; b < nb; ++b) {
    for (std::size_t i = 0; i < ms.size(); ++i)
      terms[i] = t.entry(static_cast<int>(i), b) *
                 monomial_eval(ms[i], x.coeffs());
    out[b] = pairwise_sum(terms);
  }
  return PcsVector(t.target(), std::move(out));
}

std::vector<double> nat_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b, int webSize) {
  std::vector<double> out(webSize, 0.0);
  for (int k = 0; k < webSize; ++k) {
    std::vector<double> terms;
    terms.reserve(k + 1);
    for (int i = 0; i <= k; ++i) {
      double ai = i < static_cast<int>(a.size()) ? a[i] : 0.0;
      double bj = (k - i) < static_cast<int>(b.size()) ? b[k - i] : 0.0;
      terms.push_back(ai * bj);
    }
    out[k] = pairwise_sum(terms);
  }
  return out;
}

PcsMatrix convolution_series_matrix(int webSize, const std::vector<double>& a,
                                    int degree, int coeffIndexOffset) {
  Pcs src = Pcs::bang(Pcs::snat(webSize - 1), degree);
  Pcs tgt = Pcs::snat(webSize - 1);
  std::vector<std::vector<double>> entries(
      src.web_size(), std::vector<double>(webSize, 0.0));
  const auto& ms = src.bang_multisets();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    int idx = ms_size(ms[i]) + coeffIndexOffset;
    if (idx < 0 || idx >= static_cast<int>(a.size())) continue;
    int b = ms_sum(ms[i]);  // atom labels are the nat values themselves
    if (b >= webSize) continue;
    entries[i][b] = ms_multinomial(ms[i]) * a[idx];
  }
  return PcsMatrix(std::move(src), std::move(tgt), std::move(entries));
}

}  // namespace cones
