#include "cones/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace cones {

namespace {

constexpr int kMaxDepth = 20;

void validate_key(const std::string& s, int depth) {
  if (static_cast<int>(s.size()) > depth)
    throw structural_error("TreeVector: string '" + s +
                           "' longer than the depth");
  for (char c : s)
    if (c != '0' && c != '1')
      throw structural_error("TreeVector: string '" + s + "' is not binary");
}

}  // namespace

TreeVector::TreeVector(int depth, std::map<std::string, double> coeffs)
    : depth_(depth) {
  if (depth < 0 || depth > kMaxDepth)
    throw structural_error("TreeVector: depth out of range");
  for (auto& [s, v] : coeffs) {
    validate_key(s, depth);
    if (!(v >= 0.0) || !std::isfinite(v))
      throw structural_error("TreeVector: negative or non-finite entry at '" +
                             s + "'");
    if (v > 0.0) coeffs_.emplace(s, v);
  }
}

TreeVector TreeVector::zero(int depth) { return TreeVector(depth, {}); }

TreeVector TreeVector::coin_flip(int depth) {
  std::map<std::string, double> cs;
  std::function<void(const std::string&)> rec = [&](const std::string& s) {
    cs[s] = std::pow(2.0, -static_cast<double>(s.size()));
    if (static_cast<int>(s.size()) < depth) {
      rec(s + "0");
      rec(s + "1");
    }
  };
  rec("");
  return TreeVector(depth, std::move(cs));
}

double TreeVector::at(const std::string& s) const {
  auto it = coeffs_.find(s);
  return it == coeffs_.end() ? 0.0 : it->second;
}

TreeVector TreeVector::with_entry(const std::string& s, double v) const {
  std::map<std::string, double> cs = coeffs_;
  if (v == 0.0)
    cs.erase(s);
  else
    cs[s] = v;
  return TreeVector(depth_, std::move(cs));
}

TreeVector tree_add(const TreeVector& a, const TreeVector& b) {
  if (a.depth() != b.depth())
    throw structural_error("tree_add: depth mismatch");
  std::map<std::string, double> cs = a.coeffs();
  for (const auto& [s, v] : b.coeffs()) cs[s] += v;
  return TreeVector(a.depth(), std::move(cs));
}

TreeVector tree_scale(const TreeVector& a, double s) {
  if (s < 0.0) throw structural_error("tree_scale: negative scalar");
  std::map<std::string, double> cs;
  for (const auto& [k, v] : a.coeffs()) cs.emplace(k, v * s);
  return TreeVector(a.depth(), std::move(cs));
}

double tree_max_diff(const TreeVector& a, const TreeVector& b) {
  double worst = 0.0;
  for (const auto& [s, v] : a.coeffs())
    worst = std::max(worst, std::abs(v - b.at(s)));
  for (const auto& [s, v] : b.coeffs())
    worst = std::max(worst, std::abs(v - a.at(s)));
  return worst;
}

bool is_additive(const TreeVector& x, double tol) {
  bool ok = true;
  std::function<void(const std::string&)> rec = [&](const std::string& s) {
    if (static_cast<int>(s.size()) >= x.depth()) return;
    if (std::abs(x.at(s) - x.at(s + "0") - x.at(s + "1")) > tol) {
      ok = false;
      return;
    }
    rec(s + "0");
    rec(s + "1");
  };
  rec("");
  return ok;
}

double antichain_norm(const TreeVector& x) {
  std::function<double(const std::string&)> best =
      [&](const std::string& s) -> double {
    if (static_cast<int>(s.size()) == x.depth()) return x.at(s);
    return std::max(x.at(s), best(s + "0") + best(s + "1"));
  };
  return best("");
}

TreeVector theta_apply(const TreeVector& x) {
  std::map<std::string, double> cs;
  std::function<void(const std::string&)> rec = [&](const std::string& s) {
    double v = 0.0;
    if (static_cast<int>(s.size()) < x.depth())
      v = x.at(s + "0") + x.at(s + "1");
    if (v != 0.0) cs[s] = v;
    if (static_cast<int>(s.size()) < x.depth()) {
      rec(s + "0");
      rec(s + "1");
    }
  };
  rec("");
  return TreeVector(x.depth(), std::move(cs));
}

Space cantor_leaf_space(int depth) {
  if (depth < 0 || depth > kMaxDepth)
    throw structural_error("cantor_leaf_space: depth out of range");
  std::vector<std::string> labels;
  labels.reserve(std::size_t{1} << depth);
  for (std::size_t i = 0; i < (std::size_t{1} << depth); ++i) {
    std::string s(depth, '0');
    for (int b = 0; b < depth; ++b)
      if (i & (std::size_t{1} << (depth - 1 - b))) s[b] = '1';
    labels.push_back(std::move(s));
  }
  return Space::discrete(labels);
}

FiniteMeasure to_measure(const TreeVector& x) {
  if (!is_additive(x))
    throw structural_error("to_measure: tree vector is not additive");
  Space leaves = cantor_leaf_space(x.depth());
  FiniteMeasure mu = FiniteMeasure::zero(leaves);
  for (int i = 0; i < leaves.size(); ++i)
    mu.accumulate(i, x.at(leaves.labels()[i]));
  mu.prune();
  return mu;
}

TreeVector from_measure(const FiniteMeasure& mu, int depth) {
  Space leaves = cantor_leaf_space(depth);
  require_same_space(mu.space(), leaves, "from_measure");
  std::map<std::string, double> cs;
  for (const auto& [i, m] : mu.atoms()) cs[leaves.labels()[i]] = m;
  // Inner nodes bottom-up, so additivity holds bit-exactly.
  for (int len = depth - 1; len >= 0; --len) {
    std::set<std::string> level;
    for (const auto& [s, v] : cs)
      if (static_cast<int>(s.size()) == len + 1)
        level.insert(s.substr(0, len));
    for (const auto& s : level) {
      auto i0 = cs.find(s + "0"), i1 = cs.find(s + "1");
      double sum = (i0 != cs.end() ? i0->second : 0.0) +
                   (i1 != cs.end() ? i1->second : 0.0);
      if (sum != 0.0) cs[s] = sum;
    }
  }
  return TreeVector(depth, std::move(cs));
}

}  // namespace cones
