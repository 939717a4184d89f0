#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "cones/cantor.hpp"

using namespace cones;

namespace {

// Random vector with entries on every string of length <= depth.
TreeVector random_tree(RngStream& rng, int depth) {
  std::map<std::string, double> cs;
  std::function<void(const std::string&)> rec = [&](const std::string& s) {
    if (rng.uniform() < 0.85) cs[s] = rng.uniform(0.0, 1.0);
    if (int(s.size()) < depth) {
      rec(s + "0");
      rec(s + "1");
    }
  };
  rec("");
  return TreeVector(depth, std::move(cs));
}

// Additive vector: random leaves, inner nodes summed bottom-up.
TreeVector random_additive(RngStream& rng, int depth) {
  Space leaves = cantor_leaf_space(depth);
  FiniteMeasure mu = FiniteMeasure::zero(leaves);
  for (int i = 0; i < leaves.size(); ++i)
    mu.accumulate(i, rng.uniform(0.01, 1.0));
  return from_measure(mu, depth);
}

std::map<std::string, double> node_values(const TreeVector& x) {
  std::map<std::string, double> out;
  for (const std::string& s : oracle::tree_nodes(x.depth()))
    out[s] = x.at(s);
  return out;
}

// Value of one explicitly enumerated antichain, summed in the same
// tree-shaped association the dynamic program uses.
double antichain_value_treewise(const TreeVector& x,
                                const std::vector<std::string>& chain,
                                const std::string& s) {
  for (const std::string& c : chain)
    if (c == s) return x.at(s);
  if (int(s.size()) == x.depth()) return 0.0;
  return antichain_value_treewise(x, chain, s + "0") +
         antichain_value_treewise(x, chain, s + "1");
}

double inner_theta_gap(const TreeVector& x) {
  TreeVector tx = theta_apply(x);
  double worst = 0.0;
  std::function<void(const std::string&)> rec = [&](const std::string& s) {
    if (int(s.size()) >= x.depth()) return;
    worst = std::max(worst, std::abs(tx.at(s) - x.at(s)));
    rec(s + "0");
    rec(s + "1");
  };
  rec("");
  return worst;
}

}  // namespace

TEST_CASE("coin flip vector") {
  for (int depth = 1; depth <= 6; ++depth) {
    TreeVector c = TreeVector::coin_flip(depth);
    CHECK(c.at("") == 1.0);
    CHECK(is_additive(c));
    CHECK(antichain_norm(c) == 1.0);
    std::string s;
    double expect = 1.0;
    for (int k = 0; k < depth; ++k) {
      s += (k % 2 == 0) ? '0' : '1';
      expect *= 0.5;
      CHECK(c.at(s) == expect);
    }
  }
  CHECK(TreeVector::coin_flip(2).at("01") == 0.25);
}

TEST_CASE("tree vector plumbing and validation") {
  TreeVector x(2, {{"", 1.0}, {"01", 0.25}});
  CHECK(x.at("01") == 0.25);
  CHECK(x.at("10") == 0.0);
  CHECK(x.with_entry("10", 0.5).at("10") == 0.5);
  CHECK(x.with_entry("01", 0.0).at("01") == 0.0);

  CHECK_THROWS_AS(TreeVector(2, {{"012", 1.0}}), structural_error);
  CHECK_THROWS_AS(TreeVector(2, {{"0a", 1.0}}), structural_error);
  CHECK_THROWS_AS(TreeVector(1, {{"00", 1.0}}), structural_error);
  CHECK_THROWS_AS(TreeVector(2, {{"0", -1.0}}), structural_error);
  CHECK_THROWS_AS(TreeVector(25, {}), structural_error);
  CHECK_THROWS_AS(TreeVector(-1, {}), structural_error);

  RngStream rng(501);
  TreeVector a = random_tree(rng, 3), b = random_tree(rng, 3);
  TreeVector s = tree_add(a, b);
  CHECK(s.at("01") == a.at("01") + b.at("01"));
  CHECK(tree_scale(a, 2.0).at("1") == 2.0 * a.at("1"));
  CHECK(tree_max_diff(a, a) == 0.0);
  CHECK(tree_max_diff(s, a) > 0.0);
}

TEST_CASE("antichain norm equals brute-force enumeration at depth 3") {
  RngStream rng(502);
  std::vector<std::vector<std::string>> chains = oracle::antichains(3);
  REQUIRE(chains.size() == 677);

  for (int rep = 0; rep < 50; ++rep) {
    TreeVector x = random_tree(rng, 3);
    double dp = antichain_norm(x);

    // Flat left-to-right sums from the oracle: equal within rounding.
    double flat = oracle::best_antichain_weight(node_values(x), 3);
    CHECK(dp == doctest::Approx(flat).epsilon(1e-12));

    // Tree-shaped sums over the same enumeration: equal exactly.
    double best = 0.0;
    for (const auto& chain : chains)
      best = std::max(best, antichain_value_treewise(x, chain, ""));
    CHECK(dp == best);
  }
}

TEST_CASE("antichain norm hand cases") {
  // Root dominates everything below it.
  TreeVector big(2, {{"", 5.0}, {"0", 1.0}, {"11", 1.0}});
  CHECK(antichain_norm(big) == 5.0);
  // Two incomparable nodes beat the root.
  TreeVector split(2, {{"", 1.0}, {"0", 0.8}, {"1", 0.7}});
  CHECK(antichain_norm(split) == 1.5);
  // Mixing depths: {"0", "10"} is an antichain.
  TreeVector mixed(2, {{"0", 0.6}, {"10", 0.5}, {"1", 0.2}});
  CHECK(antichain_norm(mixed) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(antichain_norm(TreeVector::zero(3)) == 0.0);
}

TEST_CASE("additive vectors round-trip through leaf measures") {
  RngStream rng(503);
  for (int depth = 1; depth <= 5; ++depth) {
    for (int rep = 0; rep < 10; ++rep) {
      TreeVector x = random_additive(rng, depth);
      REQUIRE(is_additive(x));

      FiniteMeasure mu = to_measure(x);
      CHECK(mu.space() == cantor_leaf_space(depth));
      TreeVector back = from_measure(mu, depth);
      CHECK(tree_max_diff(back, x) == 0.0);  // bit-exact, not approximate

      // The norm of an additive vector is its root coefficient, exactly.
      CHECK(antichain_norm(x) == x.at(""));
      // And the measure carries the same total up to rounding.
      CHECK(mu.total() == doctest::Approx(x.at("")).epsilon(1e-12));
    }
  }

  SUBCASE("non-additive vectors are refused") {
    TreeVector x(1, {{"", 1.0}, {"0", 0.2}, {"1", 0.3}});
    CHECK(!is_additive(x));
    CHECK_THROWS_AS(to_measure(x), structural_error);
  }

  SUBCASE("measure on the wrong space is refused") {
    FiniteMeasure mu = FiniteMeasure::dirac(cantor_leaf_space(2), 0);
    CHECK_THROWS_AS(from_measure(mu, 3), structural_error);
  }
}

TEST_CASE("theta fixes exactly the additive vectors") {
  RngStream rng(504);

  for (int rep = 0; rep < 30; ++rep) {
    TreeVector add = random_additive(rng, 3);
    CHECK(inner_theta_gap(add) == 0.0);

    // Perturbing any inner node breaks the fixed-point property.
    TreeVector bent = add.with_entry("0", add.at("0") + 0.125);
    CHECK(!is_additive(bent));
    CHECK(inner_theta_gap(bent) >= 0.124);

    // Generic random vectors are caught too (leaves alone stay additive).
    TreeVector gen = random_tree(rng, 3);
    CHECK(is_additive(gen) == (inner_theta_gap(gen) <= 1e-12));
  }

  SUBCASE("theta recomputes parents from children") {
    TreeVector x(2, {{"", 9.0}, {"0", 1.0}, {"00", 0.5}, {"01", 0.25}});
    TreeVector tx = theta_apply(x);
    CHECK(tx.at("") == 1.0);      // x_0 + x_1
    CHECK(tx.at("0") == 0.75);    // x_00 + x_01
    CHECK(tx.at("00") == 0.0);    // leaves are cleared
  }
}

TEST_CASE("leaf space labels are the binary strings in order") {
  Space s = cantor_leaf_space(3);
  CHECK(s.size() == 8);
  CHECK(s.labels().front() == "000");
  CHECK(s.labels()[3] == "011");
  CHECK(s.labels().back() == "111");
  CHECK(cantor_leaf_space(0).size() == 1);
  CHECK(cantor_leaf_space(0).labels().front().empty());
}
