#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cones/common.hpp"

namespace cones {

// A finite multiset of coordinate indices, stored as a sorted vector.
// Multisets index monomials: x^m = prod_{a in m} x_a.
using Multiset = std::vector<int>;

Multiset ms_sorted(Multiset m);
Multiset ms_union(const Multiset& a, const Multiset& b);
int ms_size(const Multiset& m);
// Sum of the elements (used as a target index for convolution powers).
int ms_sum(const Multiset& m);
std::map<int, int> ms_counts(const Multiset& m);

double factorial(int n);
double binomial(int n, int k);
// m! = prod of multiplicity factorials.
double ms_factorial(const Multiset& m);
// |m|! / m!
double ms_multinomial(const Multiset& m);

// x^m.
double monomial_eval(const Multiset& m, const std::vector<double>& x);

// All multisets over {0..dim-1} of the given exact size, in lexicographic
// order; and of any size <= maxSize, ordered by size then lexicographically.
std::vector<Multiset> enumerate_multisets_exact(int dim, int size);
std::vector<Multiset> enumerate_multisets(int dim, int maxSize);

// Enumerate every sub-multiset k of m together with the product of
// per-coordinate binomials prod_i C(m(i), k(i)) and the remainder m - k.
void for_each_submultiset(
    const Multiset& m,
    const std::function<void(const Multiset& k, double choose,
                             const Multiset& rest)>& fn);

std::string ms_name(const Multiset& m, const std::vector<std::string>& atoms);

}  // namespace cones
