#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgkit/errors.hpp"
#include "rgkit/numeric/quadrature.hpp"
#include "rgkit/rgflow/rgflow.hpp"

namespace rgkit::rgflow {

namespace {

void check(const SliceParams& p) {
  if (!(p.M > 1.0)) throw InputError("slice ratio M must exceed 1");
  if (p.m2 < 0.0) throw InputError("m^2 must be non-negative");
  if (p.m2 == 0.0 && p.d <= 2.0) throw DomainError("massless propagator needs d > 2");
}

double alpha_ceiling(const SliceParams& p) {
  if (p.m2 > 0.0) return std::max(1.0, 750.0 / p.m2);
  return std::exp(40.0 / (p.d / 2.0 - 1.0));
}

// int_{a_lo}^{a_hi} e^{-m^2 a - r^2/(4a)} a^{-d/2} da in t = log a.
double window(double a_lo, double a_hi, double r, const SliceParams& p) {
  if (a_hi <= a_lo) return 0.0;
  const double r2 = r * r;
  auto f = [&](std::span<const double> t, std::span<double> y) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double a = std::exp(t[k]);
      y[k] = std::exp(-p.m2 * a - r2 / (4.0 * a) + (1.0 - p.d / 2.0) * t[k]);
    }
  };
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = p.rel_tol;
  opt.max_intervals = 4000;
  const double lo = std::log(a_lo), hi = std::log(a_hi);
  // Split at the integrand peak so the adaptive rule sees it.
  const double peak = std::clamp(std::log(std::max(r2 / 4.0, 1e-300)), lo, hi);
  double s = 0.0;
  if (peak > lo) s += quad::integrate(quad::BatchIntegrand(f), lo, peak, opt).value;
  if (hi > peak) s += quad::integrate(quad::BatchIntegrand(f), peak, hi, opt).value;
  return s;
}

}  // namespace

double slice_propagator(std::size_t i, double r, const SliceParams& p) {
  check(p);
  if (r < 0.0) throw InputError("distance must be non-negative");
  if (i == 0) return window(1.0, alpha_ceiling(p), r, p);
  const double lo = std::pow(p.M, -2.0 * static_cast<double>(i));
  const double hi = std::pow(p.M, -2.0 * static_cast<double>(i - 1));
  return window(lo, hi, r, p);
}

double cutoff_propagator(double r, double kappa, const SliceParams& p) {
  check(p);
  if (!(kappa > 0.0)) throw DomainError("UV cutoff kappa must be positive");
  if (r < 0.0) throw InputError("distance must be non-negative");
  return window(kappa, std::max(alpha_ceiling(p), 2.0 * kappa), r, p);
}

double sliced_sum(double r, const SliceParams& p) {
  double s = 0.0;
  for (std::size_t i = 0; i <= p.rho; ++i) s += slice_propagator(i, r, p);
  return s;
}

SliceBound slice_bound(std::size_t i, const SliceParams& p) {
  check(p);
  if (p.d <= 2.0) throw DomainError("slice bound stated for d > 2");
  const double scale = std::pow(p.M, static_cast<double>(i));
  const double prefactor = std::pow(p.M, -(p.d - 2.0) * static_cast<double>(i));
  // In s = M^i r the maximizer sits below s = 2 M^2; scan then refine by golden section.
  auto g = [&](double s) { return slice_propagator(i, s / scale, p) * prefactor * std::exp(s); };
  const double s_max = 4.0 * p.M * p.M + 10.0;
  const std::size_t grid = 120;
  double best_s = 0.0, best = g(0.0);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double s = s_max * static_cast<double>(k) / grid;
    const double v = g(s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  const double h = s_max / grid;
  double a = std::max(0.0, best_s - h), b = best_s + h;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 40; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
  }
  SliceBound out;
  out.i = i;
  out.K = std::max({best, gc, gd});
  out.r_star = (gc > gd ? c : d) / scale;
  if (best >= std::max(gc, gd)) out.r_star = best_s / scale;
  return out;
}

double decay_slope(double kappa, double r_lo, double r_hi, std::size_t points, const SliceParams& p) {
  if (points < 2 || !(r_hi > r_lo)) throw InputError("decay fit needs at least two distinct radii");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const double r = r_lo + (r_hi - r_lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    const double y = std::log(cutoff_propagator(r, kappa, p));
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
  }
  const double n = static_cast<double>(points);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double bubble_beta_estimate(std::size_t i, const SliceParams& p, std::size_t extra) {
  SliceParams q = p;
  q.d = 4.0;
  q.rel_tol = 1e-9;
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-7;
  // int d^4y C_j C_k = 2 pi^2 int r^3 C_j(r) C_k(r) dr, in u = log r.
  auto pair = [&](std::size_t j, std::size_t k) {
    auto f = [&](double u) {
      const double r = std::exp(u);
      return std::pow(r, 4.0) * slice_propagator(j, r, q) * slice_propagator(k, r, q);
    };
    const double lo = std::log(std::pow(q.M, -static_cast<double>(std::max(j, k))) * 1e-3);
    const double hi = std::log(std::pow(q.M, -static_cast<double>(std::min(j, k))) * 60.0 + 60.0 / std::sqrt(std::max(q.m2, 1e-2)));
    return 2.0 * std::numbers::pi * std::numbers::pi * quad::integrate(quad::Integrand(f), lo, hi, opt).value;
  };
  double s = pair(i, i);
  for (std::size_t k = i + 1; k <= i + extra; ++k) s += 2.0 * pair(i, k);
  return s;
}

}  // namespace rgkit::rgflow
