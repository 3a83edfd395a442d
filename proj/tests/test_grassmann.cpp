#include <doctest.h>

#include <bit>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/grassmann/grassmann.hpp"

using namespace rgkit;
using namespace rgkit::grassmann;
using G = Element<Rational>;

namespace {

G random_element(std::size_t gens, std::mt19937_64& rng, bool even_only = false) {
  G e(gens);
  for (int t = 0; t < 4; ++t) {
    Mask m = rng() & ((Mask(1) << gens) - 1);
    if (even_only && std::popcount(m) % 2) m &= m - 1;
    e.add_term(m, oracle::random_rational(rng));
  }
  return e;
}

Matrix<Rational> random_antisymmetric(std::size_t n, std::mt19937_64& rng) {
  Matrix<Rational> A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      A(i, j) = oracle::random_rational(rng);
      A(j, i) = -A(i, j);
    }
  return A;
}

}  // namespace

TEST_CASE("anticommutation, nilpotency, distributivity") {
  auto c1 = G::generator(2, 0), c2 = G::generator(2, 1);
  auto c12 = c1 * c2;
  CHECK(c12.coefficient(0b11) == 1);
  CHECK((c2 * c1).coefficient(0b11) == -1);
  CHECK((c1 * c1).is_zero());
  auto one = G::scalar(2, Rational(1));
  auto p = (one + c1) * (one + c2);
  CHECK(p.coefficient(0) == 1);
  CHECK(p.coefficient(0b01) == 1);
  CHECK(p.coefficient(0b10) == 1);
  CHECK(p.coefficient(0b11) == 1);
  CHECK(product_sign(0b01, 0b10) == 1);
  CHECK(product_sign(0b10, 0b01) == -1);
  CHECK(product_sign(0b11, 0b01) == 0);
}

TEST_CASE("top form against its own order integrates to +1") {
  for (std::size_t n = 1; n <= 6; ++n) {
    // chi_n ... chi_1 against dchi_1 ... dchi_n
    G top = G::scalar(n, Rational(1));
    for (std::size_t k = n; k-- > 0;) top = top * G::generator(n, k);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    CHECK(top.berezin(order) == 1);
  }
}

TEST_CASE("exp requires an even nilpotent element") {
  CHECK_THROWS_AS(G::generator(2, 0).exp(), InputError);
  CHECK_THROWS_AS(G::scalar(2, Rational(1)).exp(), InputError);
}

TEST_CASE("determinants") {
  Matrix<Rational> D{{2, 0}, {0, 3}};
  CHECK(det_via_grassmann(D) == 6);
  CHECK(det_via_grassmann(Matrix<Rational>::identity(3)) == 1);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> u(-9, 9);
  Matrix<Rational> A(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) A(i, j) = u(rng);
  CHECK(det_via_grassmann(A) == cofactor_determinant(A));
  CHECK(det_via_grassmann(A) == oracle::leibniz_det(A));
  Matrix<double> Ad(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) Ad(i, j) = A(i, j).get_d();
  CHECK(det_via_grassmann(Ad) == doctest::Approx(oracle::leibniz_det(A).get_d()));
  CHECK_THROWS_AS(det_via_grassmann(Matrix<Rational>(9, 9)), GuardError);
}

TEST_CASE("pfaffian anchors") {
  CHECK(pfaffian(Matrix<Rational>{{0, 1}, {-1, 0}}) == 1);
  Matrix<Rational> B(6, 6);
  Rational prod(1);
  for (std::size_t k = 0; k < 3; ++k) {
    Rational a(static_cast<long>(k) + 2, 3);
    B(2 * k, 2 * k + 1) = a;
    B(2 * k + 1, 2 * k) = -a;
    prod *= a;
  }
  CHECK(pfaffian(B) == prod);
  CHECK(pfaffian_recursive(B) == prod);
  CHECK_THROWS_AS(pfaffian(Matrix<Rational>(3, 3)), InputError);
  CHECK_THROWS_AS(pfaffian(Matrix<Rational>{{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("quasi-pfaffian") {
  Matrix<Rational> D{{2, 0, 0}, {0, 5, 0}, {0, 0, -3}};
  CHECK(quasi_pfaffian_det(D, Matrix<Rational>(3, 3)) == -30);
  std::mt19937_64 rng(32);
  auto A = random_antisymmetric(4, rng);
  CHECK(quasi_pfaffian_det(Matrix<Rational>(4, 4), A) == pfaffian(A) * pfaffian(A));
  Matrix<Rational> Dr(4, 4);
  for (std::size_t i = 0; i < 4; ++i) Dr(i, i) = oracle::random_rational(rng);
  CHECK(quasi_pfaffian_det(Dr, A) == oracle::leibniz_det(Dr + A));
}

TEST_CASE("property: Pf^2 = det and the recursive oracle agree") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 * (1 + rng() % 4);
    auto A = random_antisymmetric(n, rng);
    auto pf = pfaffian(A);
    CHECK(pf * pf == determinant(A));
    CHECK(pf == pfaffian_recursive(A));
  }
}

TEST_CASE("property: simultaneous row/column swap flips the pfaffian") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 * (1 + rng() % 3);
    auto A = random_antisymmetric(n, rng);
    std::size_t i = rng() % n, j = (i + 1 + rng() % (n - 1)) % n;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[i], perm[j]);
    CHECK(pfaffian(A.select(perm, perm)) == -pfaffian(A));
  }
}

TEST_CASE("property: grassmann determinant equals elimination on random matrices") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 5;
    Matrix<Rational> A(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) A(i, j) = oracle::random_rational(rng);
    CHECK(det_via_grassmann(A) == determinant(A));
  }
}

TEST_CASE("property: associativity and graded commutativity") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_element(6, rng), b = random_element(6, rng), c = random_element(6, rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    // even elements commute with everything
    auto e = random_element(6, rng, true);
    CHECK(e * a == a * e);
    // odd monomials anticommute
    auto x = G::generator(6, rng() % 6), y = G::generator(6, rng() % 6);
    CHECK(x * y == (y * x).scaled(Rational(-1)));
  }
}
