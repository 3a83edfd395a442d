#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/toy/toy_model.hpp"

using namespace rgkit;
using namespace rgkit::toy;

namespace {

ToySpec spec(const std::string& sites, std::size_t N, int j, std::size_t dim = 1) {
  ToySpec s;
  s.dim = dim;
  s.sites = parse_sites(sites, dim);
  s.N = N;
  s.j = j;
  return s;
}

// sum over permutations with perm[field] = antifield for every contraction
Rational restricted_leibniz(const Matrix<Rational>& a, const std::vector<Contraction>& omega) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Rational total(0);
  do {
    bool ok = true;
    for (const auto& c : omega) ok = ok && p[c.field] == c.antifield;
    if (!ok) continue;
    Rational term(permutation_sign(p));
    for (std::size_t i = 0; i < n; ++i) {
      bool fixed = false;
      for (const auto& c : omega) fixed = fixed || c.field == i;
      if (!fixed) term *= a(i, p[i]);
    }
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace

TEST_CASE("site parsing") {
  CHECK(parse_sites("line:3", 1).size() == 3);
  CHECK(parse_sites("grid:2", 2).size() == 4);
  auto s = parse_sites("0,0;1,0.5", 2);
  REQUIRE(s.size() == 2);
  CHECK(s[1][1] == 0.5);
  CHECK_THROWS_AS(parse_sites("ring:3", 1), InputError);
}

TEST_CASE("profile matrix is symmetric PSD with unit diagonal") {
  auto K = profile_matrix_double(spec("grid:2", 2, 1, 2));
  for (std::size_t i = 0; i < K.rows(); ++i) {
    CHECK(K(i, i) == 1.0);
    for (std::size_t j = 0; j < K.cols(); ++j) CHECK(K(i, j) == K(j, i));
  }
  CHECK(oracle::leibniz_det(profile_matrix(spec("grid:2", 2, 1, 2))) > 0);
}

TEST_CASE("one mode per colour: Pauli forces every order to vanish") {
  auto p = exact_log_Z(spec("line:1", 1, 1), 4);
  for (const auto& c : p.coefficients) CHECK(c == 0);
  auto t = tree_expansion_pressure(spec("line:1", 1, 1), 4);
  for (const auto& c : t.coefficients) CHECK(c == 0);
}

TEST_CASE("order one on a single site with two colours") {
  // <V>/lambda = W sum_{a != b} <psibar_a psi_a><psibar_b psi_b> = W * 2 * (M^{-dj/2} N^{-1/2})^2 = 1
  auto s = spec("line:1", 2, 1);
  auto p = exact_log_Z(s, 1);
  REQUIRE(p.coefficients.size() == 2);
  CHECK(p.coefficients[0] == 0);
  CHECK(p.coefficients[1] == Rational(-1) / volume(s));
  CHECK(tree_expansion_pressure(s, 1).coefficients[1] == p.coefficients[1]);
}

TEST_CASE("tree expansion equals the exact pressure on small specs") {
  for (const char* sites : {"line:1", "line:2", "line:3"})
    for (int j : {1, 3}) {
      auto s = spec(sites, 2, j);
      auto e = exact_log_Z(s, 3), t = tree_expansion_pressure(s, 3);
      for (std::size_t n = 0; n <= 3; ++n) CHECK(e.coefficients[n] == t.coefficients[n]);
    }
  CHECK_THROWS_AS(exact_log_Z(spec("line:3", 3, 1), 2), GuardError);
  CHECK_THROWS_AS(tree_expansion_pressure(spec("line:2", 2, 1), 5), GuardError);
}

TEST_CASE("labelled trees") {
  CHECK(labelled_trees(1).size() == 1);
  CHECK(labelled_trees(3).size() == 3);
  CHECK(labelled_trees(4).size() == 16);
  CHECK(labelled_trees(5).size() == 125);
}

TEST_CASE("property: contraction signs match the restricted Leibniz sum") {
  std::mt19937_64 rng(81);
  for (std::size_t n : {2u, 3u})
    for (const auto& tree : labelled_trees(n))
      for (const auto& omega : contraction_choices(n, tree)) {
        Matrix<Rational> a(2 * n, 2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i)
          for (std::size_t k = 0; k < 2 * n; ++k) a(i, k) = oracle::random_rational(rng);
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 0; i < 2 * n; ++i) {
          bool r = false, c = false;
          for (const auto& x : omega) {
            r = r || x.field == i;
            c = c || x.antifield == i;
          }
          if (!r) rows.push_back(i);
          if (!c) cols.push_back(i);
        }
        CHECK(contraction_sign(n, omega) * determinant(a.select(rows, cols)) == restricted_leibniz(a, omega));
      }
}

TEST_CASE("property: colour assignments per tree number N^{n+1}") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t N : {1u, 2u, 3u})
      for (const auto& tree : labelled_trees(n))
        for (const auto& omega : contraction_choices(n, tree)) {
          std::uint64_t expect = 1;
          for (std::size_t k = 0; k <= n; ++k) expect *= N;
          CHECK(count_color_assignments(n, omega, N) == expect);
        }
}

TEST_CASE("property: explicit and expanded tree integrands agree") {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(0, 1);
  auto K = profile_matrix_double(spec("line:3", 2, 1));
  std::size_t nonzero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 2;
    auto trees = labelled_trees(n);
    const auto& tree = trees[rng() % trees.size()];
    std::vector<std::size_t> site(n);
    for (auto& x : site) x = rng() % 3;
    std::vector<std::array<std::size_t, 2>> color(n);
    for (auto& c : color) c = {rng() % 2, rng() % 2};
    std::vector<double> w(n - 1);
    for (auto& x : w) x = u(rng);
    const double a = tree_integrand_explicit(K, site, color, tree, w);
    const double b = tree_integrand_expanded(K, site, color, tree, w);
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    if (std::abs(a) > 1e-6) ++nonzero;
  }
  CHECK(nonzero > 20);
}

TEST_CASE("property: weakened Gram bound on every sampled remaining minor") {
  for (std::size_t n : {2u, 3u, 4u}) {
    auto a = gram_audit(spec("line:3", 2, 1), n, 300, 90 + n);
    CHECK(a.checked > 0);
    CHECK(a.violations == 0);
    CHECK(a.worst_ratio <= 1.0);
  }
}

TEST_CASE("property: coefficient growth is uniform in j and N") {
  auto sites = parse_sites("line:3", 1);
  auto rows = uniformity(sites, 1, {1, 3, 5}, {2, 3}, 2.0, 3);
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    if (r.min_normalized == 0.0) continue;
    CHECK(r.ratio() <= 2.0);
  }
}
