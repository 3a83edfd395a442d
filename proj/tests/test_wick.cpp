#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/wick/wick.hpp"

using namespace rgkit;
using namespace rgkit::wick;

TEST_CASE("pairing counts") {
  CHECK(count_pairings(4) == 3);
  CHECK(count_pairings(6) == 15);
  CHECK(count_pairings(0) == 1);
  CHECK_THROWS_AS(count_pairings(5), InputError);
  CHECK_THROWS_AS(count_pairings(-2), InputError);
}

TEST_CASE("pairing enumeration matches the permutation filter") {
  for (std::size_t m : {0u, 2u, 4u, 6u, 8u}) {
    std::vector<Pairing> seen;
    for_each_pairing(m, [&](const Pairing& p) { seen.push_back(p); });
    auto ref = oracle::matchings_by_permutation(m);
    if (m == 0) {
      CHECK(seen.size() == 1);
      continue;
    }
    std::sort(seen.begin(), seen.end());
    std::sort(ref.begin(), ref.end());
    CHECK(seen == ref);
  }
}

TEST_CASE("gaussian moments") {
  Matrix<double> I = Matrix<double>::identity(2);
  CHECK(gaussian_moment(I, {0, 0, 1, 1}) == doctest::Approx(1.0));
  Matrix<double> one(1, 1, 1.0);
  CHECK(gaussian_moment(one, {0, 0, 0, 0}) == doctest::Approx(3.0));
  CHECK(gaussian_moment(I, {0, 1, 1}) == 0.0);
}

TEST_CASE("covariance check") {
  CHECK(is_covariance(Matrix<double>{{2, 1}, {1, 2}}));
  CHECK_FALSE(is_covariance(Matrix<double>{{1, 2}, {2, 1}}));
  CHECK_FALSE(is_covariance(Matrix<double>{{1, 0.5}, {0.4, 1}}));
}

TEST_CASE("order one classes") {
  auto vac = enumerate_schemes(1, 0);
  CHECK(vac.total_schemes == 3);
  REQUIRE(vac.classes.size() == 1);
  CHECK(vac.classes[0].multiplicity == 3);
  CHECK(vac.classes[0].symmetry_factor == 8);

  auto two = enumerate_schemes(1, 2);
  CHECK(two.total_schemes == 15);
  REQUIRE(two.classes.size() == 2);
  std::vector<BigInt> mult{two.classes[0].multiplicity, two.classes[1].multiplicity};
  std::sort(mult.begin(), mult.end());
  CHECK(mult[0] == 3);
  CHECK(mult[1] == 12);
  for (const auto& c : two.classes) {
    if (c.multiplicity == 12) {
      CHECK(c.symmetry_factor == 2);
      CHECK(c.connected);
    } else {
      CHECK(c.symmetry_factor == 8);
      CHECK(c.has_vacuum_component);
    }
  }

  auto bare = enumerate_schemes(0, 2);
  CHECK(bare.total_schemes == 1);
  REQUIRE(bare.classes.size() == 1);
}

TEST_CASE("vacuum filter and guard") {
  EnumerateOptions opt;
  opt.exclude_vacuum = true;
  auto e = enumerate_schemes(1, 2, opt);
  CHECK(e.total_schemes == 15);
  CHECK(e.retained_schemes == 12);
  REQUIRE(e.classes.size() == 1);
  opt.max_schemes = 100;
  CHECK_THROWS_AS(enumerate_schemes(2, 2, opt), GuardError);
}

TEST_CASE("symmetry factor must be integral") {
  CHECK(symmetry_factor(BigInt(3), 1) == 8);
  CHECK_THROWS_AS(symmetry_factor(BigInt(5), 1), InvariantError);
}

TEST_CASE("property: class multiplicities sum to (4n+N-1)!!") {
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t N = 0; N <= 4; N += 2) {
      if (n == 0 && N == 0) continue;
      auto e = enumerate_schemes(n, N);
      BigInt sum = 0;
      for (const auto& c : e.classes) {
        sum += c.multiplicity;
        BigInt top = factorial(static_cast<unsigned>(n));
        for (std::size_t k = 0; k < n; ++k) top *= 24;
        CHECK(c.symmetry_factor * c.multiplicity == Rational(top));
        CHECK(c.symmetry_factor.get_den() == 1);
      }
      CHECK(sum == odd_double_factorial(static_cast<unsigned>((4 * n + N) / 2)));
      CHECK(e.total_schemes == sum);
    }
}

TEST_CASE("property: moments agree with the permutation oracle, symmetric in labels") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix<Rational> C(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) C(i, j) = C(j, i) = oracle::random_rational(rng);
    std::vector<std::size_t> labels(2 + 2 * (rng() % 3));
    for (auto& l : labels) l = rng() % 3;
    auto m = gaussian_moment(C, labels);
    CHECK(m == oracle::moment_by_permutation(C, labels));
    std::shuffle(labels.begin(), labels.end(), rng);
    CHECK(gaussian_moment(C, labels) == m);
  }
}

TEST_CASE("property: moments are multilinear in the covariance entries") {
  // Doubling every entry scales a 2p-point moment by 2^p.
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix<Rational> C(4, 4), C2(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) {
        C(i, j) = C(j, i) = oracle::random_rational(rng);
        C2(i, j) = C2(j, i) = 2 * C(i, j);
      }
    std::vector<std::size_t> labels{0, 1, 2, 3, 0, 2};
    CHECK(gaussian_moment(C2, labels) == 8 * gaussian_moment(C, labels));
  }
}
