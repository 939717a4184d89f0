#include "cones/multiset.hpp"

#include <algorithm>
#include <functional>

namespace cones {

Multiset ms_sorted(Multiset m) {
  std::sort(m.begin(), m.end());
  return m;
}

Multiset ms_union(const Multiset& a, const Multiset& b) {
  Multiset out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int ms_size(const Multiset& m) { return static_cast<int>(m.size()); }

int ms_sum(const Multiset& m) {
  int s = 0;
  for (int a : m) s += a;
  return s;
}

std::map<int, int> ms_counts(const Multiset& m) {
  std::map<int, int> c;
  for (int a : m) ++c[a];
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double ms_factorial(const Multiset& m) {
  double f = 1.0;
  for (const auto& [a, c] : ms_counts(m)) f *= factorial(c);
  return f;
}

double ms_multinomial(const Multiset& m) {
  return factorial(ms_size(m)) / ms_factorial(m);
}

double monomial_eval(const Multiset& m, const std::vector<double>& x) {
  double v = 1.0;
  for (int a : m) {
    if (a < 0 || a >= static_cast<int>(x.size()))
      throw structural_error("monomial_eval: coordinate outside dimension");
    v *= x[a];
  }
  return v;
}

std::vector<Multiset> enumerate_multisets_exact(int dim, int size) {
  std::vector<Multiset> out;
  Multiset cur;
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int a = start; a < dim; ++a) {
      cur.push_back(a);
      rec(a, remaining - 1);
      cur.pop_back();
    }
  };
  rec(0, size);
  return out;
}

std::vector<Multiset> enumerate_multisets(int dim, int maxSize) {
  std::vector<Multiset> out;
  for (int s = 0; s <= maxSize; ++s) {
    auto level = enumerate_multisets_exact(dim, s);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

void for_each_submultiset(
    const Multiset& m,
    const std::function<void(const Multiset& k, double choose,
                             const Multiset& rest)>& fn) {
  std::vector<std::pair<int, int>> cs;
  for (const auto& [a, c] : ms_counts(m)) cs.emplace_back(a, c);
  Multiset k, rest;
  std::function<void(std::size_t, double)> rec = [&](std::size_t idx,
                                                     double choose) {
    if (idx == cs.size()) {
      fn(k, choose, rest);
      return;
    }
    auto [atom, count] = cs[idx];
    for (int take = 0; take <= count; ++take) {
      std::size_t ks = k.size(), rs = rest.size();
      for (int i = 0; i < take; ++i) k.push_back(atom);
      for (int i = 0; i < count - take; ++i) rest.push_back(atom);
      rec(idx + 1, choose * binomial(count, take));
      k.resize(ks);
      rest.resize(rs);
    }
  };
  rec(0, 1.0);
}

std::string ms_name(const Multiset& m, const std::vector<std::string>& atoms) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += atoms.at(m[i]);
  }
  return s + "]";
}

}  // namespace cones
