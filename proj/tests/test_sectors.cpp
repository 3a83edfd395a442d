#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rgkit/errors.hpp"
#include "rgkit/sectors/gevrey.hpp"
#include "rgkit/sectors/hubbard.hpp"
#include "rgkit/sectors/jellium.hpp"
#include "rgkit/sectors/matsubara.hpp"

using namespace rgkit;
using namespace rgkit::sectors;

namespace {
constexpr double kPi = std::numbers::pi;

// Every direction tuple with slices 1..i_max.
template <class F>
void for_each_direction(std::size_t i_max, F&& f) {
  std::vector<std::array<std::size_t, 2>> legs;
  for (std::size_t i = 1; i <= i_max; ++i)
    for (std::size_t s = 0; s <= i; ++s) legs.push_back({i, s});
  for (const auto& a : legs)
    for (const auto& b : legs)
      for (const auto& c : legs)
        for (const auto& d : legs) f(DirectionTuple{a, b, c, d});
}
}  // namespace

// --- Gevrey partition and temperature ---

TEST_CASE("partition of unity on a log grid") {
  Gevrey g(0.5, 2.0);
  const std::size_t I = 8;
  const double lo = std::log(std::pow(2.0, -2.0 * I)), hi = std::log(10.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double r = std::exp(lo + (hi - lo) * k / 999.0);
    worst = std::max(worst, std::abs(g.partition_sum(r, I) - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("slice supports") {
  Gevrey g(0.5, 2.0);
  for (std::size_t i = 1; i <= 5; ++i) {
    const double a = std::pow(2.0, -2.0 * i), b = 2.0 * std::pow(2.0, -2.0 * (i - 1.0));
    CHECK(g.u_slice(i, 0.999 * a) == 0.0);
    CHECK(g.u_slice(i, 1.001 * b) == 0.0);
    CHECK(g.u_slice(i, std::sqrt(a * b)) > 0.0);
  }
  CHECK(g.u(0.5) == 1.0);
  CHECK(g.u(2.5) == 0.0);
  CHECK_THROWS_AS(Gevrey(1.0, 2.0), InputError);
}

TEST_CASE("last slice at temperature T") {
  CHECK(i_max(0.01, 2.0) == 6);
  for (long k : {2L, 4L, 7L}) {
    const double T = 2.0 * std::sqrt(2.0) / (kPi * std::pow(2.0, static_cast<double>(k)));
    CHECK(i_max(T, 2.0) == k);
  }
}

// --- Matsubara ---

TEST_CASE("Matsubara frequencies never vanish") {
  auto f = matsubara_frequencies(7.5, 40);
  double mn = INFINITY;
  for (double k : f) mn = std::min(mn, std::abs(k));
  CHECK(mn == kPi / 7.5);
  CHECK(f.size() == 80);
  for (double k : matsubara_frequencies_below(100.0, 0.5)) CHECK(std::abs(k) <= 0.5);
}

TEST_CASE("Matsubara sum converges to the closed form") {
  for (double e : {-0.7, 0.3, 1.5}) {
    auto s = matsubara_sum(10.0, e, 2.5, 20000);
    const double exact = matsubara_closed_form(10.0, e, 2.5);
    CHECK(std::abs(s.corrected.real() - exact) <= s.error_bound + 1e-12);
    CHECK(std::abs(s.corrected.imag()) < 1e-9);
  }
}

// --- Hubbard geometry ---

TEST_CASE("tilted basis identity on random momenta") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int k = 0; k < 10000; ++k) {
    const double k1 = u(rng), k2 = u(rng);
    auto t = to_tilted(0.0, k1, k2);
    CHECK(std::abs(hubbard_dispersion(k1, k2) - hubbard_dispersion_tilted(t.plus, t.minus)) < 1e-12);
    double b1, b2;
    from_tilted(t, b1, b2);
    CHECK(std::abs(b1 - k1) < 1e-12);
    CHECK(std::abs(b2 - k2) < 1e-12);
  }
}

TEST_CASE("support windows, case by case") {
  const double M = 2.0;
  auto w0 = hubbard_sector_support(5, 0, M);
  CHECK(w0.lo == 2.0 / (kPi * M));
  CHECK(w0.hi == 1.0);
  auto wi = hubbard_sector_support(5, 5, M);
  CHECK(wi.lo == 0.0);
  CHECK(wi.hi == std::sqrt(2.0) * std::pow(M, -5.0));
  auto wm = hubbard_sector_support(5, 3, M);
  CHECK(wm.lo == doctest::Approx(2.0 * std::pow(M, -3.0) / (kPi * M)));
  CHECK(wm.hi == doctest::Approx(std::sqrt(2.0) * std::pow(M, -3.0)));
  CHECK_THROWS_AS(hubbard_sector_support(0, 0, M), InputError);
  CHECK_THROWS_AS(hubbard_sector_support(3, 4, M), InputError);
}

TEST_CASE("sector taxonomy") {
  CHECK(sector_category(6, 6, 6).category == Category::corner);
  for (std::size_t s = 2; s < 6; ++s) CHECK(sector_category(6, s, s).category == Category::diagonal);
  auto b = sector_category(6, 1, 3);
  CHECK(b.depth == 0);
  CHECK(b.border);
  CHECK_THROWS_AS(sector_category(6, 1, 2), InputError);
  for (std::size_t i = 1; i <= 7; ++i)
    for (const auto& s : enumerate_sectors(i)) {
      CHECK(s.s_plus + s.s_minus + 2 >= i);
      CHECK(s.border == ((s.category == Category::general || s.category == Category::diagonal) && s.depth == 0));
      CHECK(s.depth == static_cast<long>(s.s_plus + s.s_minus) - static_cast<long>(i) + 2);
    }
}

TEST_CASE("sector windows are nonempty exactly above the depth threshold") {
  for (std::size_t i = 1; i <= 7; ++i)
    for (std::size_t a = 0; a <= i; ++a)
      for (std::size_t b = 0; b <= i; ++b) CHECK(sector_nonempty(i, a, b) == (a + b + 2 >= i));
}

TEST_CASE("connected components of the sector support") {
  // i = 3 keeps the thinnest support several cells wide at this grid
  CHECK(sector_components(3, 3, 3, 4.0, 1024) == 2);  // corner
  CHECK(sector_components(3, 0, 3, 4.0, 1024) == 2);  // middle-face
  CHECK(sector_components(3, 1, 3, 4.0, 1024) == 4);  // face
  CHECK(sector_components(3, 1, 1, 4.0, 1024) == 8);  // diagonal
  CHECK(sector_components(3, 1, 2, 4.0, 1024) == 8);  // general, both indices positive
  CHECK(sector_components(3, 0, 2, 4.0, 1024) == 4);  // general with a zero index
  CHECK(sector_components(3, 1, 2, 4.0, 2048) == sector_components(3, 1, 2, 4.0, 1024));
}

TEST_CASE("momentum conservation clauses") {
  const double M = 8.0;
  auto eq = [](std::size_t i, std::array<std::size_t, 4> s) {
    return DirectionTuple{{{i, s[0]}, {i, s[1]}, {i, s[2]}, {i, s[3]}}};
  };
  CHECK(check_direction(eq(7, {3, 3, 5, 7}), M).admissible);
  auto mixed = DirectionTuple{{{2, 2}, {5, 5}, {5, 5}, {5, 5}}};
  auto v = check_direction(mixed, M);
  CHECK(v.admissible);
  CHECK_FALSE(v.single_slice_rule);
  auto bad = eq(4, {1, 4, 4, 4});
  CHECK_FALSE(check_direction(bad, M).admissible);
  CHECK_FALSE(feasible(bad, M));
  CHECK_THROWS_AS(check_direction(bad, 2.0), DomainError);
  CHECK(conservation_min_M() == doctest::Approx(3.0 * kPi / std::sqrt(2.0)));
}

TEST_CASE("property: conservation rule is sound against the interval oracle") {
  for (double M : {8.0, 16.0}) {
    std::size_t feasible_count = 0, failures = 0;
    for_each_direction(6, [&](const DirectionTuple& t) {
      if (!feasible(t, M)) return;
      ++feasible_count;
      if (!check_direction(t, M).admissible) ++failures;
    });
    CHECK(feasible_count > 0);
    CHECK(failures == 0);
  }
}

TEST_CASE("property: interval oracle agrees with the grid oracle") {
  std::mt19937_64 rng(72);
  const double M = 8.0;
  std::size_t compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    DirectionTuple t;
    std::size_t i = 1 + rng() % 4;
    for (auto& leg : t) leg = {i, rng() % (i + 1)};
    const double h = std::pow(M, -static_cast<double>(i)) / 8.0;
    bool exact = feasible(t, M);
    bool grid = false;
    try {
      grid = feasible_grid(t, M, h);
    } catch (const GuardError&) {
      continue;
    }
    ++compared;
    // the grid tolerance can only widen the feasible set
    if (exact) CHECK(grid);
  }
  CHECK(compared > 100);
}

TEST_CASE("property: winding offset vanishes unless two legs sit at index 0") {
  const double M = 16.0;
  std::size_t failures = 0;
  for_each_direction(6, [&](const DirectionTuple& t) {
    int zeros = 0;
    for (const auto& leg : t) zeros += leg[1] == 0;
    if (zeros >= 2) return;
    for (long m : feasible_offsets(t, M))
      if (m != 0) ++failures;
  });
  CHECK(failures == 0);
}

TEST_CASE("curvature profile") {
  auto s = hubbard_curvature_profile(0.3, 4, 2.0);
  CHECK(std::abs(std::cos(s.k1) + std::cos(s.k2) - std::pow(2.0, -4.0)) < 1e-12);
  CHECK(s.R > 0.0);
  CHECK(s.l == doctest::Approx(std::sqrt(s.w * s.R)));
  CHECK_THROWS_AS(hubbard_curvature_profile(0.3, 0.3, 4, 2.0), InputError);
  auto b = curvature_bracket(6, 2.0, 60);
  CHECK(b.c > 0.0);
  CHECK(b.d >= b.c);
  CHECK(b.d / b.c < 50.0);
}

TEST_CASE("sector propagator parity and origin") {
  DecayParams p;
  p.beta = 200.0;
  CHECK_THROWS_AS(hubbard_sector_propagator(3, 1, 1, {{0.0, 1, 0}}, p), DomainError);
  auto c = hubbard_sector_propagator(3, 1, 1, {{0.0, 0, 0}}, p);
  CHECK(std::abs(c[0]) < 1e-12);
  auto pts = probe_points(3, 1, 1, p.M);
  REQUIRE(!pts.empty());
  for (const auto& x : pts) {
    CHECK((x.n_plus - x.n_minus) % 2 == 0);
    CHECK(scaled_distance(3, 1, 1, x, p.M) <= 2.0 + 1e-12);
  }
  auto vals = hubbard_sector_propagator(3, 1, 1, pts, p);
  const double l1 = hubbard_sector_l1(3, 1, 1, p);
  for (const auto& v : vals) CHECK(std::abs(v) <= l1 * (1 + 1e-9));
}

TEST_CASE("sector propagator decays") {
  DecayParams p;
  p.beta = 200.0;
  auto fit = decay_fit(3, 2, 2, p, 12, 10.0);
  CHECK(fit.slope < 0.0);
}

// --- jellium ---

TEST_CASE("jellium Fermi surface") {
  CHECK(fermi_radius(0.5, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(jellium_dispersion({1.0, 1.0}, 0.5, 2.0)) < 1e-14);
}

TEST_CASE("sector grids") {
  auto g2 = make_sector_grid(2, 3, 2.0);
  CHECK(g2.centres.size() == static_cast<std::size_t>(std::ceil(2 * kPi * 8)));
  for (const auto& c : g2.centres) CHECK(std::hypot(c[0], c[1]) == doctest::Approx(1.0));
  auto a2 = make_sector_grid(2, 4, 2.0, SectorMode::anisotropic);
  CHECK(a2.centres.size() == static_cast<std::size_t>(std::ceil(2 * kPi * 4)));
  auto g3 = make_sector_grid(3, 2, 2.0);
  CHECK(g3.centres.size() > 4 * 16);
  CHECK(g3.radius < 2.0 / 4.0);
  CHECK_THROWS_AS(make_sector_grid(3, 2, 2.0, SectorMode::anisotropic), InputError);
}

TEST_CASE("counting: guards and the bound") {
  CHECK_THROWS_AS(count_conserving_tuples(2, 8, 2.0), GuardError);
  CHECK_THROWS_AS(count_conserving_tuples(3, 5, 2.0), GuardError);
  // the bound holds up to a constant; the ratio must stay uniform in j
  double lo = INFINITY, hi = 0.0;
  for (int j = 1; j <= 5; ++j) {
    auto r = count_conserving_tuples(2, j, 2.0);
    CHECK(r.count > 0.0);
    lo = std::min(lo, r.count / r.bound);
    hi = std::max(hi, r.count / r.bound);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("counting: threads do not change the count") {
  CountOptions one, four;
  four.threads = 4;
  CHECK(count_conserving_tuples(2, 5, 2.0, one).count == count_conserving_tuples(2, 5, 2.0, four).count);
  CHECK(count_conserving_tuples(3, 2, 2.0, one).count == count_conserving_tuples(3, 2, 2.0, four).count);
}

TEST_CASE("2D and 3D slopes differ by about three") {
  auto s2 = fit_count_slope(2, 2, 5, 2.0);
  auto s3 = fit_count_slope(3, 1, 3, 2.0);
  CHECK(s2.slope > 1.5);
  CHECK(s3.slope - s2.slope == doctest::Approx(3.0).epsilon(0.35));
}

TEST_CASE("rhombus rule") {
  const double kf = 1.0;
  Vec2 p{std::cos(0.4), std::sin(0.4)}, q{std::cos(1.9), std::sin(1.9)};
  auto w = rhombus_witness({p, Vec2{-p[0], -p[1]}, q, Vec2{-q[0], -q[1]}}, kf, 1e-9);
  CHECK(w.cls == RhombusClass::paired);
  auto d = rhombus_witness({p, p, Vec2{-p[0], -p[1]}, Vec2{-p[0], -p[1]}}, kf, 1e-9);
  CHECK(d.cls == RhombusClass::degenerate);
  CHECK_THROWS_AS(rhombus_witness({p, p, q, q}, kf, 1e-9), InputError);
  auto rows = rhombus_sweep({1e-2, 1e-4, 1e-6}, 2000, 5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].unpaired_fraction <= rows[0].unpaired_fraction);
  CHECK(rows[2].unpaired_fraction < 0.05);
}
