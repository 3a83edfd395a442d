#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rgkit/errors.hpp"
#include "rgkit/sectors/gevrey.hpp"
#include "rgkit/sectors/hubbard.hpp"
#include "rgkit/sectors/jellium.hpp"
#include "rgkit/simd/kernels.hpp"

using namespace rgkit;
using namespace rgkit::simd;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool skip_without_avx2() {
  if (avx2_supported()) return false;
  MESSAGE("AVX2 not available on this CPU; equivalence checks skipped");
  return true;
}

}  // namespace

TEST_CASE("dispatch scope restores the previous target") {
  const Isa before = active_isa();
  {
    IsaScope s(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
  }
  CHECK(active_isa() == before);
  if (!avx2_supported()) CHECK_THROWS_AS(set_isa(Isa::avx2), DomainError);
}

TEST_CASE("exp kernel: scalar reference against std::exp") {
  std::mt19937_64 rng(91);
  auto x = uniform(1000, -700.0, 700.0, rng);
  std::vector<double> y(x.size());
  scalar::exp(x.data(), y.data(), x.size());
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(y[k] == doctest::Approx(std::exp(x[k])).epsilon(1e-14));
  double under = -800.0, out = 1.0;
  scalar::exp(&under, &out, 1);
  CHECK(out == 0.0);
}

TEST_CASE("exp kernel: AVX2 against scalar") {
  if (skip_without_avx2()) return;
  std::mt19937_64 rng(92);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 1001u}) {
    auto x = uniform(n, -745.0, 709.0, rng);
    std::vector<double> a(n), b(n);
    scalar::exp(x.data(), a.data(), n);
    avx2::exp(x.data(), b.data(), n);
    for (std::size_t k = 0; k < n; ++k) {
      if (a[k] == 0.0) CHECK(b[k] == 0.0);
      else CHECK(std::abs(a[k] - b[k]) <= 4e-16 * std::abs(a[k]));
    }
  }
}

TEST_CASE("reductions: AVX2 against scalar") {
  if (skip_without_avx2()) return;
  std::mt19937_64 rng(93);
  for (std::size_t n : {0u, 1u, 5u, 8u, 13u, 4096u}) {
    auto a = uniform(n, -1, 1, rng), b = uniform(n, -1, 1, rng), c = uniform(n, -1, 1, rng),
         d = uniform(n, -1, 1, rng);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) scale += std::abs(a[k] * b[k]) + std::abs(c[k] * d[k]);
    const double tol = 1e-14 * (1.0 + scale);
    CHECK(std::abs(scalar::dot(a.data(), b.data(), n) - avx2::dot(a.data(), b.data(), n)) <= tol);
    CHECK(std::abs(scalar::sum_squares(a.data(), n) - avx2::sum_squares(a.data(), n)) <= tol);
    auto zs = scalar::complex_dot(a.data(), b.data(), c.data(), d.data(), n);
    auto zv = avx2::complex_dot(a.data(), b.data(), c.data(), d.data(), n);
    CHECK(std::abs(zs - zv) <= tol);
  }
}

TEST_CASE("weighted neighbour count: AVX2 matches scalar exactly") {
  if (skip_without_avx2()) return;
  std::mt19937_64 rng(94);
  for (std::size_t n : {0u, 2u, 9u, 1000u}) {
    auto x = uniform(n, -1, 1, rng), y = uniform(n, -1, 1, rng), z = uniform(n, -1, 1, rng);
    std::vector<double> w(n);
    for (auto& v : w) v = 1.0 + static_cast<double>(rng() % 2);
    for (int q = 0; q < 50; ++q) {
      const double px = x.empty() ? 0.3 : -x[rng() % n], py = 0.1, pz = 0.0, r2 = 0.05 * q;
      CHECK(scalar::weighted_count_within(x.data(), y.data(), z.data(), w.data(), n, px, py, pz, r2) ==
            avx2::weighted_count_within(x.data(), y.data(), z.data(), w.data(), n, px, py, pz, r2));
      CHECK(scalar::weighted_count_within(x.data(), y.data(), nullptr, w.data(), n, px, py, 0.0, r2) ==
            avx2::weighted_count_within(x.data(), y.data(), nullptr, w.data(), n, px, py, 0.0, r2));
    }
  }
}

TEST_CASE("module level: sector counts identical under both targets") {
  if (skip_without_avx2()) return;
  double s2, v2, s3, v3;
  {
    IsaScope g(Isa::scalar);
    s2 = sectors::count_conserving_tuples(2, 5, 2.0).count;
    s3 = sectors::count_conserving_tuples(3, 2, 2.0).count;
  }
  {
    IsaScope g(Isa::avx2);
    v2 = sectors::count_conserving_tuples(2, 5, 2.0).count;
    v3 = sectors::count_conserving_tuples(3, 2, 2.0).count;
  }
  CHECK(s2 == v2);
  CHECK(s3 == v3);
}

TEST_CASE("module level: Gevrey batches and sector propagator agree") {
  if (skip_without_avx2()) return;
  sectors::Gevrey g(0.5, 2.0);
  std::mt19937_64 rng(95);
  auto r = uniform(513, 0.0, 3.0, rng);
  std::vector<double> a(r.size()), b(r.size());
  {
    IsaScope s(Isa::scalar);
    g.u_slice_batch(2, r, a);
  }
  {
    IsaScope s(Isa::avx2);
    g.u_slice_batch(2, r, b);
  }
  for (std::size_t k = 0; k < r.size(); ++k) {
    CHECK(std::abs(a[k] - b[k]) <= 1e-14);
    CHECK(std::abs(a[k] - g.u_slice(2, r[k])) <= 1e-13);
  }

  sectors::DecayParams p;
  p.beta = 100.0;
  std::vector<sectors::LatticePoint> xs{{0.5, 1, 1}, {3.0, 2, 0}, {10.0, 4, 2}};
  std::vector<std::complex<double>> cs, cv;
  {
    IsaScope s(Isa::scalar);
    cs = sectors::hubbard_sector_propagator(3, 1, 2, xs, p);
  }
  {
    IsaScope s(Isa::avx2);
    cv = sectors::hubbard_sector_propagator(3, 1, 2, xs, p);
  }
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(std::abs(cs[k] - cv[k]) <= 1e-12 * (1e-30 + std::abs(cs[k])) + 1e-18);
}
