#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgkit/errors.hpp"
#include "rgkit/numeric/quadrature.hpp"
#include "rgkit/sectors/hubbard.hpp"
#include "rgkit/sectors/matsubara.hpp"
#include "rgkit/simd/kernels.hpp"

namespace rgkit::sectors {

namespace {

constexpr double kPi = std::numbers::pi;

struct Nodes {
  std::vector<double> k, c, weight;  // weight includes v_s(c^2)
};

// Quadrature nodes on {k in [-2, 2] : |cos(pi k / 2)| in the cosine window}.
Nodes direction_nodes(const Gevrey& g, std::size_t i, std::size_t s, const DecayParams& p) {
  const Window w = cosine_window(i, s, p.M);
  const double a = 2.0 / kPi * std::asin(std::min(1.0, w.lo));
  const double b = 2.0 / kPi * std::asin(std::min(1.0, w.hi));
  std::vector<std::pair<double, double>> intervals;
  for (double centre : {-1.0, 1.0}) {
    if (a == 0.0) {
      intervals.emplace_back(centre - b, centre + b);
    } else {
      intervals.emplace_back(centre - b, centre - a);
      intervals.emplace_back(centre + a, centre + b);
    }
  }
  Nodes n;
  for (auto [lo, hi] : intervals) {
    const quad::Rule r = quad::composite_gauss_legendre(lo, hi, p.panels, p.nodes);
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
      const double k = r.nodes[q];
      const double c = std::cos(0.5 * kPi * k);
      const double v = g.v_sector(s, i, c * c);
      if (v == 0.0) continue;
      n.k.push_back(k);
      n.c.push_back(c);
      n.weight.push_back(r.weights[q] * v);
    }
  }
  return n;
}

double depth_scale(std::size_t i, std::size_t s_plus, std::size_t s_minus, double M) {
  const SectorInfo info = sector_category(i, s_plus, s_minus);
  return std::pow(M, -static_cast<double>(i) - static_cast<double>(info.depth));
}

}  // namespace

double scaled_distance(std::size_t i, std::size_t s_plus, std::size_t s_minus, const LatticePoint& x, double M) {
  const double h = 0.5 * kPi;
  return std::pow(M, -static_cast<double>(i)) * std::abs(x.x0) +
         std::pow(M, -static_cast<double>(s_plus)) * h * std::abs(static_cast<double>(x.n_plus)) +
         std::pow(M, -static_cast<double>(s_minus)) * h * std::abs(static_cast<double>(x.n_minus));
}

std::vector<std::complex<double>> hubbard_sector_propagator(std::size_t i, std::size_t s_plus, std::size_t s_minus,
                                                            const std::vector<LatticePoint>& xs,
                                                            const DecayParams& p) {
  sector_category(i, s_plus, s_minus);
  if (!(p.beta > 0.0)) throw InputError("beta must be positive");
  if (p.panels == 0 || p.nodes == 0) throw InputError("quadrature needs at least one panel and node");
  for (const auto& x : xs)
    if ((x.n_plus - x.n_minus) % 2 != 0)
      throw DomainError("lattice points need x+ and x- of the same parity");
  const Gevrey g(p.alpha, p.M);
  const Nodes np = direction_nodes(g, i, s_plus, p);
  const Nodes nm = direction_nodes(g, i, s_minus, p);
  const std::size_t A = np.k.size(), B = nm.k.size();
  std::vector<std::complex<double>> out(xs.size(), 0.0);
  if (A == 0 || B == 0) return out;

  const std::size_t X = xs.size();
  // Phase tables e^{i k x} per point.
  std::vector<double> pr(X * A), pi_(X * A), mr(X * B), mi(X * B);
  for (std::size_t x = 0; x < X; ++x) {
    const double xp = 0.5 * kPi * static_cast<double>(xs[x].n_plus);
    const double xm = 0.5 * kPi * static_cast<double>(xs[x].n_minus);
    for (std::size_t a = 0; a < A; ++a) {
      pr[x * A + a] = std::cos(np.k[a] * xp);
      pi_[x * A + a] = std::sin(np.k[a] * xp);
    }
    for (std::size_t b = 0; b < B; ++b) {
      mr[x * B + b] = std::cos(nm.k[b] * xm);
      mi[x * B + b] = std::sin(nm.k[b] * xm);
    }
  }

  const double k0_max = std::sqrt(2.0) * std::pow(p.M, 1.0 - static_cast<double>(i));
  const std::vector<double> k0s = matsubara_frequencies_below(p.beta, k0_max);
  std::vector<double> r(B), u(B), gr(A * B), gi(A * B);
  std::vector<std::complex<double>> acc(X);
  for (double k0 : k0s) {
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t b = 0; b < B; ++b) {
        const double e = 2.0 * np.c[a] * nm.c[b];
        r[b] = k0 * k0 + e * e;
      }
      g.u_slice_batch(i, r, u);
      for (std::size_t b = 0; b < B; ++b) {
        const double e = 2.0 * np.c[a] * nm.c[b];
        const double den = k0 * k0 + e * e;
        const double w = np.weight[a] * nm.weight[b] * u[b] / den;
        // 1 / (i k0 - e) = (-e - i k0) / (k0^2 + e^2)
        gr[a * B + b] = -e * w;
        gi[a * B + b] = -k0 * w;
      }
    }
    for (std::size_t x = 0; x < X; ++x) {
      std::complex<double> sum = 0.0;
      const std::span<const double> br(mr.data() + x * B, B), bi(mi.data() + x * B, B);
      for (std::size_t a = 0; a < A; ++a) {
        const std::complex<double> row =
            simd::complex_dot(std::span<const double>(gr.data() + a * B, B),
                              std::span<const double>(gi.data() + a * B, B), br, bi);
        sum += std::complex<double>(pr[x * A + a], pi_[x * A + a]) * row;
      }
      acc[x] += std::polar(1.0, k0 * xs[x].x0) * sum;
    }
  }
  for (std::size_t x = 0; x < X; ++x) out[x] = acc[x] / (16.0 * p.beta);
  return out;
}

double hubbard_sector_l1(std::size_t i, std::size_t s_plus, std::size_t s_minus, const DecayParams& p) {
  sector_category(i, s_plus, s_minus);
  if (!(p.beta > 0.0)) throw InputError("beta must be positive");
  const Gevrey g(p.alpha, p.M);
  const Nodes np = direction_nodes(g, i, s_plus, p);
  const Nodes nm = direction_nodes(g, i, s_minus, p);
  const std::size_t B = nm.k.size();
  const double k0_max = std::sqrt(2.0) * std::pow(p.M, 1.0 - static_cast<double>(i));
  std::vector<double> r(B), u(B);
  double total = 0.0;
  for (double k0 : matsubara_frequencies_below(p.beta, k0_max))
    for (std::size_t a = 0; a < np.k.size(); ++a) {
      for (std::size_t b = 0; b < B; ++b) {
        const double e = 2.0 * np.c[a] * nm.c[b];
        r[b] = k0 * k0 + e * e;
      }
      g.u_slice_batch(i, r, u);
      for (std::size_t b = 0; b < B; ++b) total += np.weight[a] * nm.weight[b] * std::abs(u[b]) / std::sqrt(r[b]);
    }
  return total / (16.0 * p.beta);
}

std::vector<LatticePoint> probe_points(std::size_t i, std::size_t s_plus, std::size_t s_minus, double M) {
  sector_category(i, s_plus, s_minus);
  const double mi = std::pow(M, static_cast<double>(i));
  const long ap = std::max(1L, std::lround(std::pow(M, static_cast<double>(s_plus)) / kPi));
  const long am = std::max(1L, std::lround(std::pow(M, static_cast<double>(s_minus)) / kPi));
  std::vector<LatticePoint> out;
  for (double x0 : {0.0, 0.25 * mi, 0.5 * mi})
    for (long np : {0L, ap, 2 * ap})
      for (long nm : {0L, am, 2 * am}) {
        LatticePoint x{x0, np, nm};
        if ((np - nm) % 2 != 0) x.n_minus += 1;
        if (x.x0 == 0.0 && x.n_plus == 0 && x.n_minus == 0) continue;
        if (scaled_distance(i, s_plus, s_minus, x, M) > 2.0 + 1e-12) continue;
        if (std::find_if(out.begin(), out.end(), [&](const LatticePoint& y) {
              return y.x0 == x.x0 && y.n_plus == x.n_plus && y.n_minus == x.n_minus;
            }) == out.end())
          out.push_back(x);
      }
  return out;
}

namespace {
double band_of(const std::vector<PrefactorRow>& rows, bool l1, bool skip_border) {
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : rows) {
    if (skip_border && r.sector.border) continue;
    const double v = l1 ? r.l1_scaled : r.scaled;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == 0.0) return 0.0;
  return lo > 0.0 ? hi / lo : INFINITY;
}
}  // namespace

double PrefactorReport::band() const { return band_of(rows, false, false); }
double PrefactorReport::l1_band() const { return band_of(rows, true, false); }
double PrefactorReport::interior_band() const { return band_of(rows, false, true); }

PrefactorReport prefactor_sweep(std::size_t i, const DecayParams& p) {
  PrefactorReport rep;
  for (const SectorInfo& s : enumerate_sectors(i)) {
    const auto probes = probe_points(i, s.s_plus, s.s_minus, p.M);
    const auto vals = hubbard_sector_propagator(i, s.s_plus, s.s_minus, probes, p);
    PrefactorRow row{s};
    for (const auto& v : vals) row.sup_abs = std::max(row.sup_abs, std::abs(v));
    const double scale = depth_scale(i, s.s_plus, s.s_minus, p.M);
    row.scaled = row.sup_abs / scale;
    row.l1 = hubbard_sector_l1(i, s.s_plus, s.s_minus, p);
    row.l1_scaled = row.l1 / scale;
    rep.rows.push_back(row);
  }
  return rep;
}

DecayFit decay_fit(std::size_t i, std::size_t s_plus, std::size_t s_minus, const DecayParams& p,
                   std::size_t samples, double d_max) {
  sector_category(i, s_plus, s_minus);
  if (samples < 3) throw InputError("decay fit needs at least three samples");
  const double mi = std::pow(p.M, static_cast<double>(i));
  const double ms_p = std::pow(p.M, static_cast<double>(s_plus));
  const double ms_m = std::pow(p.M, static_cast<double>(s_minus));
  auto even = [](double v) { return 2 * std::lround(0.5 * v); };
  std::vector<LatticePoint> pts;
  const std::size_t per = 4;
  for (std::size_t t = 1; t <= samples; ++t) {
    const double d = d_max * static_cast<double>(t) / static_cast<double>(samples);
    const double n_p = d * ms_p / (0.5 * kPi), n_m = d * ms_m / (0.5 * kPi);
    pts.push_back({d * mi, 0, 0});
    pts.push_back({0.0, even(n_p), 0});
    pts.push_back({0.0, 0, even(n_m)});
    pts.push_back({0.0, even(0.5 * n_p), even(0.5 * n_m)});
  }
  const auto vals = hubbard_sector_propagator(i, s_plus, s_minus, pts, p);
  DecayFit fit;
  std::vector<double> xs, ys;
  for (std::size_t t = 0; t < samples; ++t) {
    std::size_t best = t * per;
    for (std::size_t q = t * per; q < (t + 1) * per; ++q)
      if (std::abs(vals[q]) > std::abs(vals[best])) best = q;
    const double dist = scaled_distance(i, s_plus, s_minus, pts[best], p.M);
    const double v = std::abs(vals[best]);
    fit.distance.push_back(dist);
    fit.abs_value.push_back(v);
    if (v > 0.0 && dist > 0.0) {
      xs.push_back(std::pow(dist, p.alpha));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 2) throw InvariantError("propagator vanished at every sample point");
  double mx = 0.0, my = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    mx += xs[q];
    my += ys[q];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    sxx += (xs[q] - mx) * (xs[q] - mx);
    sxy += (xs[q] - mx) * (ys[q] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace rgkit::sectors
