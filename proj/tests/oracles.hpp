#pragma once

// Slow, independent reference computations used by the test suites. Nothing here
// calls into the library's algorithms; only its value types are shared.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "rgkit/numeric/matrix.hpp"
#include "rgkit/numeric/rational.hpp"

namespace oracle {

using rgkit::Matrix;
using rgkit::Rational;

// Leibniz formula over all permutations.
template <class T>
T leibniz_det(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  T total(0);
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    T term(1);
    for (std::size_t i = 0; i < n; ++i) term *= a(i, p[i]);
    if (inv % 2) total -= term;
    else total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Perfect matchings found by filtering permutations: a permutation is kept when it lists
// pairs (p0 p1)(p2 p3)... with p_{2k} < p_{2k+1} and increasing first elements.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> matchings_by_permutation(std::size_t m) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t k = 0; k + 1 < m && ok; k += 2) {
      if (p[k] > p[k + 1]) ok = false;
      if (k >= 2 && p[k - 2] > p[k]) ok = false;
    }
    if (!ok) continue;
    std::vector<std::pair<std::size_t, std::size_t>> pairing;
    for (std::size_t k = 0; k + 1 < m; k += 2) pairing.emplace_back(p[k], p[k + 1]);
    out.push_back(pairing);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

template <class T>
T moment_by_permutation(const Matrix<T>& C, const std::vector<std::size_t>& labels) {
  if (labels.size() % 2) return T(0);
  T total(0);
  for (const auto& pairing : matchings_by_permutation(labels.size())) {
    T term(1);
    for (auto [a, b] : pairing) term *= C(labels[a], labels[b]);
    total += term;
  }
  return total;
}

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Spanning trees by testing every (v-1)-subset of the edge list for acyclicity.
inline std::size_t spanning_trees_by_subsets(std::size_t v, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (v == 0) return 0;
  const std::size_t e = edges.size();
  if (v - 1 > e) return 0;
  std::size_t count = 0;
  std::vector<bool> pick(e, false);
  std::fill(pick.end() - static_cast<long>(v - 1), pick.end(), true);
  do {
    std::vector<std::size_t> parent(v);
    std::iota(parent.begin(), parent.end(), 0);
    bool acyclic = true;
    for (std::size_t k = 0; k < e && acyclic; ++k) {
      if (!pick[k]) continue;
      auto a = find_root(parent, edges[k].first), b = find_root(parent, edges[k].second);
      if (a == b) acyclic = false;
      else parent[a] = b;
    }
    if (acyclic) ++count;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return count;
}

// Sum over arborescences rooted at vertex 0 (edges parent -> child) of prod(-A(parent, child)),
// enumerated as parent functions on vertices 1..n-1.
inline Rational directed_tree_sum(const Matrix<Rational>& A) {
  const std::size_t n = A.rows();
  if (n <= 1) return Rational(1);
  std::vector<std::size_t> parent(n, 0);
  Rational total(0);
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == n) {
      for (std::size_t x = 1; x < n; ++x) {
        std::size_t y = x, steps = 0;
        while (y != 0 && steps <= n) {
          y = parent[y];
          ++steps;
        }
        if (y != 0) return;
      }
      Rational term(1);
      for (std::size_t x = 1; x < n; ++x) term *= -A(parent[x], x);
      total += term;
      return;
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (p == v) continue;
      parent[v] = p;
      rec(v + 1);
    }
  };
  rec(1);
  return total;
}

// Composite Simpson rule with 2m panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t m = 20000) {
  const double h = (b - a) / static_cast<double>(2 * m);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < 2 * m; ++k) s += f(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline Rational random_rational(std::mt19937_64& rng, int range = 5, int denom = 4) {
  std::uniform_int_distribution<int> num(-range, range), den(1, denom);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

}  // namespace oracle
