#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rgkit/detbounds/detbounds.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/forest/forest.hpp"

using namespace rgkit;
using namespace rgkit::detbounds;

namespace {

Matrix<double> random_matrix(std::size_t n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix<double> A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = u(rng);
  return A;
}

std::vector<std::vector<double>> random_vectors(std::size_t count, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> v(count, std::vector<double>(dim));
  for (auto& x : v)
    for (auto& c : x) c = g(rng);
  return v;
}

}  // namespace

TEST_CASE("Gram bound on orthonormal families is tight") {
  GramFactorization f;
  f.f = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  f.g = f.f;
  auto r = gram_bound(f);
  CHECK(r.bound == doctest::Approx(1.0));
  CHECK(r.abs_det == doctest::Approx(1.0));
  CHECK(r.tight);
}

TEST_CASE("Gram bound is not tight for non-orthogonal families") {
  GramFactorization f;
  f.f = {{1, 0}, {1, 1}};
  f.g = {{1, 0}, {0, 1}};
  auto r = gram_bound(f);
  CHECK(r.holds);
  CHECK_FALSE(r.tight);
}

TEST_CASE("row factorization reproduces the matrix and the row bound") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  Matrix<double> A(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) A(i, j) = g(rng);
  auto f = row_factorization(A);
  auto B = f.matrix();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(B(i, j) - A(i, j)) < 1e-12);
  auto gr = gram_bound(f);
  CHECK(gr.holds);
  CHECK(gr.bound == doctest::Approx(hadamard_bounds(A).row_bound));
  CHECK(gr.abs_det == doctest::Approx(std::abs(oracle::leibniz_det(A))));
}

TEST_CASE("Hadamard matrices reach the sup bound") {
  Matrix<double> H4{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  auto r = hadamard_bounds(H4);
  CHECK(r.abs_det == doctest::Approx(16.0));
  CHECK(r.sup_bound == doctest::Approx(16.0));
  CHECK(r.all_hold());
  auto r8 = hadamard_bounds(sylvester_hadamard(8));
  CHECK(r8.abs_det == doctest::Approx(std::pow(8.0, 4.0)));
  CHECK(r8.sup_bound == doctest::Approx(r8.abs_det));
  CHECK_THROWS_AS(sylvester_hadamard(6), InputError);
}

TEST_CASE("identity and a random 8x8") {
  auto r = hadamard_bounds(Matrix<double>::identity(5));
  CHECK(r.row_bound == doctest::Approx(1.0));
  CHECK(r.abs_det == doctest::Approx(1.0));
  std::mt19937_64 rng(62);
  auto h = hadamard_bounds(random_matrix(8, rng));
  CHECK(h.all_hold());
  CHECK(h.sup_bound < 0.2 * h.naive_bound);
}

TEST_CASE("weakened Gram reduces to the plain cases") {
  std::mt19937_64 rng(63);
  auto f = random_vectors(4, 4, rng), g = random_vectors(4, 4, rng);
  std::vector<std::size_t> fv{0, 0, 1, 1}, gv{0, 1, 0, 1};
  Matrix<double> ones(2, 2, 1.0);
  auto a = weakened_gram_check(ones, f, fv, g, gv);
  GramFactorization plain{f, g};
  CHECK(a.holds);
  CHECK(a.abs_det == doctest::Approx(gram_bound(plain).abs_det));
  auto b = weakened_gram_check(Matrix<double>::identity(2), f, fv, g, gv);
  CHECK(b.holds);
  CHECK(b.reconstruction_error < 1e-10);
  CHECK_THROWS_AS(weakened_gram_check(Matrix<double>{{1, 2}, {2, 1}}, f, fv, g, gv), InputError);
}

TEST_CASE("psd square root") {
  Matrix<double> X{{2, 1}, {1, 2}};
  auto S = psd_sqrt(X);
  auto P = S * S;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(P(i, j) == doctest::Approx(X(i, j)));
}

TEST_CASE("property: all determinant bounds on 10^4 random matrices") {
  std::mt19937_64 rng(64);
  std::size_t violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    auto A = random_matrix(n, rng);
    auto h = hadamard_bounds(A);
    if (!h.all_hold()) ++violations;
    if (!gram_bound(row_factorization(A)).holds) ++violations;
    GramFactorization gf{random_vectors(n, n + 1, rng), random_vectors(n, n + 1, rng)};
    if (!gram_bound(gf).holds) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("property: weakened Gram on forest-weakened draws") {
  std::mt19937_64 rng(65);
  std::uniform_real_distribution<double> u(0, 1);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t nv = 2 + rng() % 4;
    forest::Forest fo{nv, {}};
    for (std::size_t v = 1; v < nv; ++v)
      if (rng() % 4) fo.edges.emplace_back(rng() % v, v);
    std::vector<double> w(fo.edges.size());
    for (auto& x : w) x = u(rng);
    auto X = forest::x_matrix(fo, w);
    std::size_t m = nv + rng() % 4;
    std::vector<std::size_t> fv(m), gv(m);
    for (auto& x : fv) x = rng() % nv;
    for (auto& x : gv) x = rng() % nv;
    auto r = weakened_gram_check(X, random_vectors(m, 3, rng), fv, random_vectors(m, 3, rng), gv);
    if (!r.holds) ++violations;
    CHECK(r.reconstruction_error < 1e-9);
  }
  CHECK(violations == 0);
}
