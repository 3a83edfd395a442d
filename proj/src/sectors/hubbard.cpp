#include "rgkit/sectors/hubbard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "rgkit/errors.hpp"

namespace rgkit::sectors {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}  // namespace

TiltedMomentum to_tilted(double k0, double k1, double k2) { return {k0, (k1 + k2) / kPi, (k2 - k1) / kPi}; }

void from_tilted(const TiltedMomentum& t, double& k1, double& k2) {
  k1 = 0.5 * kPi * (t.plus - t.minus);
  k2 = 0.5 * kPi * (t.plus + t.minus);
}

double fractional_part(double k) { return k >= 0.0 ? k - 1.0 : k + 1.0; }

double hubbard_dispersion(double k1, double k2) { return std::cos(k1) + std::cos(k2); }

double hubbard_dispersion_tilted(double kp, double km) {
  return 2.0 * std::cos(0.5 * kPi * kp) * std::cos(0.5 * kPi * km);
}

namespace {
void check_sector_index(std::size_t i, std::size_t s) {
  if (i == 0) throw InputError("sectors are defined for slices i >= 1");
  if (s > i) throw InputError("sector index s=" + std::to_string(s) + " exceeds slice i=" + std::to_string(i));
}
}  // namespace

Window hubbard_sector_support(std::size_t i, std::size_t s, double M) {
  check_sector_index(i, s);
  const double ms = std::pow(M, -static_cast<double>(s));
  if (s == 0) return {2.0 / (kPi * M), 1.0};
  if (s == i) return {0.0, kSqrt2 * ms};
  return {2.0 * ms / (kPi * M), kSqrt2 * ms};
}

Window cosine_window(std::size_t i, std::size_t s, double M) {
  check_sector_index(i, s);
  const double ms = std::pow(M, -static_cast<double>(s));
  if (s == 0) return {1.0 / M, 1.0};
  if (s == i) return {0.0, kSqrt2 * ms};
  return {ms / M, kSqrt2 * ms};
}

bool sector_nonempty(std::size_t i, std::size_t s_plus, std::size_t s_minus) {
  return static_cast<long>(s_plus + s_minus) >= static_cast<long>(i) - 2;
}

SectorInfo sector_category(std::size_t i, std::size_t s_plus, std::size_t s_minus) {
  check_sector_index(i, s_plus);
  check_sector_index(i, s_minus);
  if (!sector_nonempty(i, s_plus, s_minus)) throw InputError("empty sector: s+ + s- < i - 2");
  SectorInfo info{i, s_plus, s_minus, static_cast<long>(s_plus + s_minus) - static_cast<long>(i) + 2};
  const bool plus_full = s_plus == i, minus_full = s_minus == i;
  if ((s_plus == 0 && minus_full) || (plus_full && s_minus == 0)) info.category = Category::middle_face;
  else if (plus_full && minus_full) info.category = Category::corner;
  else if (plus_full || minus_full) info.category = Category::face;
  else if (s_plus == s_minus && 2 * static_cast<long>(s_plus) >= static_cast<long>(i) - 2) info.category = Category::diagonal;
  else info.category = Category::general;
  info.border = (info.category == Category::general || info.category == Category::diagonal) && info.depth == 0;
  return info;
}

std::vector<SectorInfo> enumerate_sectors(std::size_t i) {
  std::vector<SectorInfo> out;
  for (std::size_t sp = 0; sp <= i; ++sp)
    for (std::size_t sm = 0; sm <= i; ++sm)
      if (sector_nonempty(i, sp, sm)) out.push_back(sector_category(i, sp, sm));
  return out;
}

std::string to_string(Category c) {
  switch (c) {
    case Category::middle_face: return "middle-face";
    case Category::face: return "face";
    case Category::corner: return "corner";
    case Category::diagonal: return "diagonal";
    case Category::general: return "general";
  }
  return "?";
}

std::size_t sector_components(std::size_t i, std::size_t s_plus, std::size_t s_minus, double M, std::size_t grid) {
  sector_category(i, s_plus, s_minus);
  if (grid < 8 || grid % 2) throw InputError("grid must be even and at least 8");
  const Gevrey g(0.5, M);
  const double h = 4.0 / static_cast<double>(grid);
  std::vector<double> c(grid);
  std::vector<bool> in_plus(grid), in_minus(grid);
  for (std::size_t a = 0; a < grid; ++a) {
    const double k = -2.0 + (static_cast<double>(a) + 0.5) * h;
    c[a] = std::cos(0.5 * kPi * k);
    in_plus[a] = g.v_sector(s_plus, i, c[a] * c[a]) > 0.0;
    in_minus[a] = g.v_sector(s_minus, i, c[a] * c[a]) > 0.0;
  }
  // Some k0 reaches u_i > 0 iff e^2 < 2 M^{-2(i-1)}.
  const double e2_max = 2.0 * std::pow(M, -2.0 * static_cast<double>(i - 1));
  std::vector<std::size_t> parent(grid * grid);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::vector<bool> on(grid * grid, false);
  for (std::size_t a = 0; a < grid; ++a)
    for (std::size_t b = 0; b < grid; ++b)
      on[a * grid + b] = in_plus[a] && in_minus[b] && 4.0 * c[a] * c[a] * c[b] * c[b] < e2_max;
  const std::size_t half = grid / 2;
  for (std::size_t a = 0; a < grid; ++a)
    for (std::size_t b = 0; b < grid; ++b) {
      const std::size_t id = a * grid + b;
      if (!on[id]) continue;
      const std::size_t right = a * grid + (b + 1) % grid;
      const std::size_t down = ((a + 1) % grid) * grid + b;
      const std::size_t shifted = ((a + half) % grid) * grid + (b + half) % grid;
      if (on[right]) unite(id, right);
      if (on[down]) unite(id, down);
      if (on[shifted]) unite(id, shifted);
    }
  std::size_t count = 0;
  for (std::size_t id = 0; id < on.size(); ++id)
    if (on[id] && find(id) == id) ++count;
  return count;
}

double conservation_min_M() { return 3.0 * kPi / kSqrt2; }

namespace {
void check_M(double M) {
  if (!(M > conservation_min_M()))
    throw DomainError("momentum conservation rule assumes M > 3 pi / sqrt 2 (about 6.664); got M = " +
                      std::to_string(M));
}

void check_tuple(const DirectionTuple& t) {
  for (const auto& leg : t) check_sector_index(leg[0], leg[1]);
}
}  // namespace

DirectionVerdict check_direction(const DirectionTuple& t, double M) {
  check_M(M);
  check_tuple(t);
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a][1] < t[b][1]; });
  const std::size_t first = order[0];
  DirectionVerdict v;
  v.single_slice_rule = t[order[1]][1] - t[first][1] <= 1;
  bool coincide = t[first][1] == t[first][0];
  bool strictly_lowest = true;
  for (std::size_t k = 1; k < 4; ++k) strictly_lowest = strictly_lowest && t[first][0] < t[order[k]][0];
  v.multislice_rule = v.single_slice_rule || (coincide && strictly_lowest);
  v.admissible = v.multislice_rule;
  if (v.single_slice_rule) v.clause = "two smallest indices differ by at most one";
  else if (v.multislice_rule) v.clause = "smallest index equals its scale, which is strictly lowest";
  else if (coincide)
    v.clause = "violated: smallest index equals its scale but that scale is not strictly lowest";
  else v.clause = "violated: two smallest indices differ by more than one and the smallest is below its scale";
  return v;
}

ConservationVerdict check_momentum_conservation(const VertexTuple& t, double M) {
  DirectionTuple plus, minus;
  for (std::size_t k = 0; k < 4; ++k) {
    plus[k] = {t[k].scale, t[k].s_plus};
    minus[k] = {t[k].scale, t[k].s_minus};
  }
  ConservationVerdict v;
  v.plus = check_direction(plus, M);
  v.minus = check_direction(minus, M);
  v.admissible = v.plus.admissible && v.minus.admissible;
  return v;
}

std::vector<long> feasible_offsets(const DirectionTuple& t, double M) {
  check_tuple(t);
  std::array<Window, 4> w;
  for (std::size_t k = 0; k < 4; ++k) w[k] = hubbard_sector_support(t[k][0], t[k][1], M);
  std::vector<long> out;
  for (long m = -2; m <= 2; ++m) {
    const double target = 2.0 * static_cast<double>(m);
    bool ok = false;
    for (unsigned signs = 0; signs < 16 && !ok; ++signs) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (signs & (1u << k)) {
          lo -= w[k].hi;
          hi -= w[k].lo;
        } else {
          lo += w[k].lo;
          hi += w[k].hi;
        }
      }
      ok = target >= lo && target <= hi;
    }
    if (ok) out.push_back(m);
  }
  return out;
}

bool feasible(const DirectionTuple& t, double M) { return !feasible_offsets(t, M).empty(); }

bool feasible_grid(const DirectionTuple& t, double M, double h) {
  check_tuple(t);
  if (!(h > 0.0)) throw InputError("grid spacing must be positive");
  std::array<std::vector<double>, 4> pts;
  double tol = 1e-15;
  for (std::size_t k = 0; k < 4; ++k) {
    const Window w = hubbard_sector_support(t[k][0], t[k][1], M);
    const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((w.hi - w.lo) / h)));
    if (steps > 20000) throw GuardError("grid oracle resolution too fine for this window");
    const double step = (w.hi - w.lo) / static_cast<double>(steps);
    tol += 0.5 * step;
    for (std::size_t q = 0; q <= steps; ++q) {
      const double x = w.lo + step * static_cast<double>(q);
      pts[k].push_back(x);
      pts[k].push_back(-x);
    }
  }
  std::vector<double> right;
  right.reserve(pts[2].size() * pts[3].size());
  for (double a : pts[2])
    for (double b : pts[3]) right.push_back(a + b);
  std::sort(right.begin(), right.end());
  for (double a : pts[0])
    for (double b : pts[1])
      for (long m = -2; m <= 2; ++m) {
        const double need = 2.0 * static_cast<double>(m) - a - b;
        auto it = std::lower_bound(right.begin(), right.end(), need - tol);
        if (it != right.end() && *it <= need + tol) return true;
      }
  return false;
}

namespace {

double curve_k2(double k1, double level) {
  const double c = level - std::cos(k1);
  if (c < -1.0 || c > 1.0) return NAN;
  return std::acos(c);
}

}  // namespace

CurvatureSample hubbard_curvature_profile(double k1, int j, double M) {
  if (!(k1 >= 0.0 && k1 <= 0.5 * kPi)) throw InputError("k1 must lie in [0, pi/2]");
  const double level = std::pow(M, -static_cast<double>(j));
  const double k2 = curve_k2(k1, level);
  if (std::isnan(k2)) throw InputError("no point of the level curve above this k1");
  return hubbard_curvature_profile(k1, k2, j, M);
}

CurvatureSample hubbard_curvature_profile(double k1, double k2, int j, double M, double tol) {
  if (!(k1 >= 0.0 && k1 <= 0.5 * kPi) || !(k2 > 0.0)) throw InputError("need 0 <= k1 <= pi/2 and k2 > 0");
  const double level = std::pow(M, -static_cast<double>(j));
  const double e = std::cos(k1) + std::cos(k2);
  if (std::abs(e * e - level * level) > tol) throw InputError("point is off the curve (cos k1 + cos k2)^2 = M^{-2j}");
  if (e < 0.0) throw InputError("point lies on the negative branch");
  CurvatureSample s;
  s.k1 = k1;
  s.k2 = k2;
  const double s1 = std::sin(k1), s2 = std::sin(k2);
  s.R = std::pow(s1 * s1 + s2 * s2, 1.5) / std::abs(std::cos(k1) * s2 * s2 + std::cos(k2) * s1 * s1);
  s.d = (kPi - k1 - k2) / kSqrt2;
  // Distance to the outer level curve, parameterized by its own k1 (mirror included).
  const double outer = kSqrt2 * M * level;
  auto dist = [&](double t) -> double {
    const double t2 = curve_k2(t, outer);
    if (std::isnan(t2)) return std::numeric_limits<double>::infinity();
    return std::hypot(t - k1, t2 - k2);
  };
  const std::size_t scan = 4000;
  double best_t = 0.0, best = INFINITY;
  for (std::size_t q = 0; q <= scan; ++q) {
    const double t = -kPi + 2.0 * kPi * static_cast<double>(q) / scan;
    const double v = dist(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = best_t - 2.0 * kPi / scan, b = best_t + 2.0 * kPi / scan;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (dist(c) < dist(d)) b = d;
    else a = c;
  }
  s.w = std::min(best, dist(0.5 * (a + b)));
  s.l = std::sqrt(s.w * s.R);
  s.ratio = s.l / (std::pow(M, -0.5 * static_cast<double>(j)) + k1);
  return s;
}

CurvatureBracket curvature_bracket(int j, double M, std::size_t samples) {
  if (samples < 2) throw InputError("need at least two samples");
  CurvatureBracket b;
  b.c = INFINITY;
  b.d = 0.0;
  for (std::size_t q = 0; q < samples; ++q) {
    const double k1 = 0.5 * kPi * static_cast<double>(q) / static_cast<double>(samples - 1);
    CurvatureSample s = hubbard_curvature_profile(k1, j, M);
    b.c = std::min(b.c, s.ratio);
    b.d = std::max(b.d, s.ratio);
    b.samples.push_back(s);
  }
  return b;
}

}  // namespace rgkit::sectors
