#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rgkit/errors.hpp"
#include "rgkit/rgflow/rgflow.hpp"

using namespace rgkit;
using namespace rgkit::rgflow;

namespace {

// Slice integral by Simpson in log a.
double slice_oracle(std::size_t i, double r, const SliceParams& p) {
  const double lo = std::log(std::pow(p.M, -2.0 * static_cast<double>(i)));
  const double hi = std::log(std::pow(p.M, -2.0 * (static_cast<double>(i) - 1.0)));
  return oracle::simpson(
      [&](double t) {
        const double a = std::exp(t);
        return a * std::exp(-p.m2 * a - r * r / (4.0 * a)) * std::pow(a, -p.d / 2.0);
      },
      lo, hi, 4000);
}

}  // namespace

TEST_CASE("slice propagator against direct quadrature") {
  SliceParams p;
  for (std::size_t i : {1u, 3u, 6u})
    for (double r : {0.0, 0.05, 0.4})
      CHECK(slice_propagator(i, r, p) == doctest::Approx(slice_oracle(i, r, p)).epsilon(1e-9));
}

TEST_CASE("slices telescope to the cutoff propagator") {
  SliceParams p;
  p.rho = 8;
  const double kappa = std::pow(p.M, -2.0 * static_cast<double>(p.rho));
  for (double r : {0.01, 0.1, 1.0, 3.0}) {
    const double c = cutoff_propagator(r, kappa, p);
    CHECK(std::abs(sliced_sum(r, p) - c) <= 1e-8 * c);
  }
  CHECK_THROWS_AS(cutoff_propagator(1.0, 0.0, p), DomainError);
}

TEST_CASE("deep slices vanish at fixed distance") {
  SliceParams p;
  CHECK(slice_propagator(12, 1.0, p) < 1e-100);
  CHECK(slice_propagator(12, 1.0, p) < slice_propagator(4, 1.0, p));
}

TEST_CASE("slice bound constant is uniform in i") {
  for (double d : {3.0, 4.0}) {
    SliceParams p;
    p.d = d;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 1; i <= 8; ++i) {
      auto b = slice_bound(i, p);
      lo = std::min(lo, b.K);
      hi = std::max(hi, b.K);
    }
    CHECK(hi / lo < 4.0);
  }
}

TEST_CASE("cutoff propagator decays") {
  SliceParams p;
  CHECK(decay_slope(0.01, 2.0, 6.0, 20, p) < 0.0);
}

TEST_CASE("stable phi^4 flow") {
  auto zero = flow_stable_phi4(0.0, 1.0, 20);
  for (double x : zero.lambda) CHECK(x == 0.0);
  CHECK_FALSE(zero.blowup);

  auto t = flow_stable_phi4(0.1, 1.0, 100);
  CHECK(t.blowup);
  CHECK(std::abs(static_cast<double>(t.blowup_index) - 10.0) <= 2.0);
  CHECK(t.index_above_1e3 >= t.blowup_index);
  CHECK_THROWS_AS(flow_stable_phi4(-1.0, 1.0, 5), InputError);
}

TEST_CASE("downward flow inverts the upward step") {
  auto up = flow_stable_phi4(0.05, 1.0, 8);
  REQUIRE(up.lambda.size() == 9);
  auto down = flow_stable_phi4(up.lambda.back(), 1.0, 8, 1.0, Direction::downward);
  REQUIRE(down.lambda.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) CHECK(down.lambda[i] == doctest::Approx(up.lambda[i]).epsilon(1e-12));
}

TEST_CASE("asymptotically free flow") {
  auto t = flow_asymptotically_free(0.1, 1.0, 0.0, 10);
  CHECK(t.lambda[10] == doctest::Approx(0.05).epsilon(1e-14));
  for (std::size_t i = 0; i <= 10; ++i) {
    CHECK(1.0 / t.lambda[i] - 1.0 / t.lambda[0] == doctest::Approx(static_cast<double>(i)).epsilon(1e-12));
    CHECK(t.second_order[i] == doctest::Approx(t.lambda[i]));
  }
  auto g = flow_asymptotically_free(0.3, 0.7, 0.2, 50);
  for (std::size_t i = 1; i <= 50; ++i) {
    CHECK(g.lambda[i] > 0.0);
    CHECK(g.lambda[i] < g.lambda[i - 1]);
    CHECK(g.third_order[i] == doctest::Approx(g.lambda[i]).epsilon(1e-12));
  }
}

TEST_CASE("renormalon moments: closed forms and growth") {
  auto rows = renormalon_growth(16, 1.0);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(rows[0].value == doctest::Approx(pi2 / 2.0).epsilon(1e-10));
  CHECK(rows[1].value == doctest::Approx(pi2 / 4.0).epsilon(1e-8));
  for (const auto& r : rows) CHECK(r.plain_value == doctest::Approx(rows[0].plain_value).epsilon(1e-10));
  CHECK(plateau_drift(rows, 10, 15) < 0.1);
  CHECK(rows[16].plain_ratio < 0.1);
  CHECK_THROWS_AS(renormalon_growth(21, 1.0), GuardError);
}

TEST_CASE("property: Landau index tracks 1/(beta lambda)") {
  for (double lam : {0.05, 0.1, 0.2}) {
    auto t = flow_stable_phi4(lam, 1.0, 1000);
    REQUIRE(t.blowup);
    const double pred = 1.0 / lam;
    CHECK(std::abs(static_cast<double>(t.blowup_index) - pred) <= 0.2 * pred);
    CHECK(t.index_above_1e3 > t.blowup_index);
  }
}
