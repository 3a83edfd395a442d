#include "rgkit/sectors/jellium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <thread>
#include <unordered_map>

#include "rgkit/errors.hpp"
#include "rgkit/simd/kernels.hpp"

namespace rgkit::sectors {

namespace {
constexpr double kPi = std::numbers::pi;

double chord(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

std::array<double, 3> polar(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}
}  // namespace

double jellium_dispersion(const std::vector<double>& k, double m_star, double mu) {
  if (!(m_star > 0.0)) throw InputError("effective mass must be positive");
  double k2 = 0.0;
  for (double v : k) k2 += v * v;
  return k2 / (2.0 * m_star) - mu;
}

double fermi_radius(double m_star, double mu) {
  if (!(m_star > 0.0) || !(mu > 0.0)) throw InputError("need m* > 0 and mu > 0 for a Fermi surface");
  return std::sqrt(2.0 * m_star * mu);
}

SectorGrid make_sector_grid(std::size_t dim, int j, double M, SectorMode mode) {
  if (dim != 2 && dim != 3) throw InputError("sector grids exist in dimension 2 or 3");
  if (j < 0) throw InputError("scale j must be non-negative");
  if (!(M > 1.0)) throw InputError("scale ratio M must exceed 1");
  if (dim == 3 && mode == SectorMode::anisotropic) throw InputError("anisotropic sectors are two-dimensional only");
  SectorGrid g;
  g.dim = dim;
  g.j = j;
  g.M = M;
  g.mode = mode;
  const double mj = std::pow(M, static_cast<double>(j));
  if (dim == 2) {
    const double per = mode == SectorMode::isotropic ? mj : std::sqrt(mj);
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * kPi * per));
    const double width = 2.0 * kPi / static_cast<double>(n);
    for (std::size_t a = 0; a < n; ++a) {
      const double t = (static_cast<double>(a) + 0.5) * width;
      g.centres.push_back({std::cos(t), std::sin(t), 0.0});
    }
    g.radius = 2.0 * std::sin(0.25 * width);
    return g;
  }
  const auto n_theta = static_cast<std::size_t>(std::ceil(kPi * mj));
  const double dt = kPi / static_cast<double>(n_theta);
  for (std::size_t b = 0; b < n_theta; ++b) {
    const double t0 = static_cast<double>(b) * dt, t1 = t0 + dt, tc = t0 + 0.5 * dt;
    const auto n_phi = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * kPi * std::sin(tc) * mj)));
    const double dp = 2.0 * kPi / static_cast<double>(n_phi);
    for (std::size_t a = 0; a < n_phi; ++a) {
      const double pc = (static_cast<double>(a) + 0.5) * dp;
      const auto c = polar(tc, pc);
      g.centres.push_back(c);
      // The patch is convex enough that the farthest point is a corner or an edge midpoint.
      for (double t : {t0, tc, t1})
        for (double p : {pc - 0.5 * dp, pc, pc + 0.5 * dp}) g.radius = std::max(g.radius, chord(c, polar(t, p)));
    }
  }
  return g;
}

namespace {

struct PairCloud {
  std::vector<double> x, y, z, w;
};

struct Column {
  std::size_t begin = 0, end = 0;
};

std::uint64_t column_key(std::int64_t cx, std::int64_t cy) {
  return (static_cast<std::uint64_t>(cx + (1 << 20)) << 32) | static_cast<std::uint64_t>(cy + (1 << 20));
}

}  // namespace

CountResult count_conserving_tuples(std::size_t dim, int j, double M, const CountOptions& opt, SectorMode mode) {
  if (dim == 2 && j > 7) throw GuardError("2D tuple counting is guarded at j <= 7");
  if (dim == 3 && j > 4) throw GuardError("3D tuple counting is guarded at j <= 4");
  if (!(opt.c_tol >= 0.0)) throw InputError("tolerance constant must be non-negative");
  const SectorGrid g = make_sector_grid(dim, j, M, mode);
  const double mj = std::pow(M, -static_cast<double>(j));
  const double mfac = 1.0 + std::abs(static_cast<double>(opt.m));
  const double R = 4.0 * g.radius + opt.c_tol * mfac * mj;
  const double r2 = R * R;
  const std::size_t n = g.centres.size();

  // Unordered pair sums with multiplicity, bucketed by (cx, cy) and sorted by z within a column.
  const double h = 0.5 * R;
  struct Item {
    std::int64_t cx, cy;
    double x, y, z, w;
  };
  std::vector<Item> items;
  items.reserve(n * (n + 1) / 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const double x = g.centres[a][0] + g.centres[b][0];
      const double y = g.centres[a][1] + g.centres[b][1];
      const double z = g.centres[a][2] + g.centres[b][2];
      items.push_back({static_cast<std::int64_t>(std::floor(x / h)), static_cast<std::int64_t>(std::floor(y / h)), x,
                       y, z, a == b ? 1.0 : 2.0});
    }
  std::sort(items.begin(), items.end(), [](const Item& p, const Item& q) {
    if (p.cx != q.cx) return p.cx < q.cx;
    if (p.cy != q.cy) return p.cy < q.cy;
    return p.z < q.z;
  });
  PairCloud cloud;
  std::unordered_map<std::uint64_t, Column> columns;
  for (std::size_t k = 0; k < items.size(); ++k) {
    cloud.x.push_back(items[k].x);
    cloud.y.push_back(items[k].y);
    cloud.z.push_back(items[k].z);
    cloud.w.push_back(items[k].w);
    auto& col = columns[column_key(items[k].cx, items[k].cy)];
    if (col.end == 0) col.begin = k;
    col.end = k + 1;
  }
  const bool planar = dim == 2;
  simd::PointsView view{cloud.x, cloud.y, planar ? std::span<const double>() : std::span<const double>(cloud.z),
                        cloud.w};

  auto query = [&](std::size_t lo, std::size_t hi) {
    double total = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      const double px = cloud.x[k], py = cloud.y[k], pz = cloud.z[k];
      // Partners Q satisfy |P + Q| <= R, so they sit around -P.
      const double tx = -px, ty = -py;
      const auto cx0 = static_cast<std::int64_t>(std::floor((tx - R) / h));
      const auto cx1 = static_cast<std::int64_t>(std::floor((tx + R) / h));
      const auto cy0 = static_cast<std::int64_t>(std::floor((ty - R) / h));
      const auto cy1 = static_cast<std::int64_t>(std::floor((ty + R) / h));
      double found = 0.0;
      for (auto cx = cx0; cx <= cx1; ++cx) {
        const double gx = std::max({0.0, cx * h - tx, tx - (cx + 1) * h});
        for (auto cy = cy0; cy <= cy1; ++cy) {
          const double gy = std::max({0.0, cy * h - ty, ty - (cy + 1) * h});
          if (gx * gx + gy * gy > r2) continue;
          auto it = columns.find(column_key(cx, cy));
          if (it == columns.end()) continue;
          std::size_t b = it->second.begin, e = it->second.end;
          if (!planar) {
            const double* zb = cloud.z.data();
            b = static_cast<std::size_t>(std::lower_bound(zb + b, zb + e, -pz - R) - zb);
            e = static_cast<std::size_t>(std::upper_bound(zb + b, zb + e, -pz + R) - zb);
          }
          if (b < e) found += simd::weighted_count_within(view, b, e, px, py, pz, r2);
        }
      }
      total += cloud.w[k] * found;
    }
    return total;
  };

  const std::size_t threads = std::max<std::size_t>(1, opt.threads);
  const std::size_t total_items = cloud.x.size();
  std::vector<double> partial(threads, 0.0);
  if (threads == 1) {
    partial[0] = query(0, total_items);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total_items + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        const std::size_t lo = std::min(total_items, t * chunk), hi = std::min(total_items, lo + chunk);
        partial[t] = query(lo, hi);
      });
    for (auto& th : pool) th.join();
  }
  CountResult res{dim, j, n, R};
  for (double p : partial) res.count += p;
  const double mjp = std::pow(M, static_cast<double>(j));
  res.bound = dim == 2 ? mjp * mjp * (1.0 + j) * mfac * mfac : std::pow(mjp, 5.0) * mfac * mfac * mfac;
  return res;
}

SlopeFit fit_count_slope(std::size_t dim, int j_lo, int j_hi, double M, const CountOptions& opt, SectorMode mode) {
  if (j_hi - j_lo < 1) throw InputError("slope fit needs at least two scales");
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (int j = j_lo; j <= j_hi; ++j) {
    fit.rows.push_back(count_conserving_tuples(dim, j, M, opt, mode));
    xs.push_back(j);
    ys.push_back(std::log(fit.rows.back().count) / std::log(M));
  }
  const double nn = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / nn;
    my += ys[k] / nn;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

RhombusWitness rhombus_witness(const std::array<Vec2, 4>& p, double k_f, double tol) {
  if (!(k_f > 0.0) || !(tol > 0.0)) throw InputError("need k_F > 0 and tol > 0");
  Vec2 sum{0.0, 0.0};
  for (const auto& v : p) {
    if (std::abs(std::hypot(v[0], v[1]) - k_f) > tol * k_f) throw InputError("momentum off the Fermi circle");
    sum[0] += v[0];
    sum[1] += v[1];
  }
  if (std::hypot(sum[0], sum[1]) > 4.0 * tol * k_f) throw InputError("momenta do not sum to zero");
  const double thr = std::sqrt(tol) * k_f;
  auto norm_sum = [&](int a, int b) { return std::hypot(p[a][0] + p[b][0], p[a][1] + p[b][1]); };
  RhombusWitness w;
  constexpr int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  w.residual = INFINITY;
  for (int q = 0; q < 3; ++q) {
    const double r = std::max(norm_sum(pairings[q][0], pairings[q][1]), norm_sum(pairings[q][2], pairings[q][3]));
    if (r < w.residual) {
      w.residual = r;
      w.pairing = q;
    }
  }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) w.cooper = w.cooper || norm_sum(a, b) <= thr;
  bool collinear = true;
  for (int a = 1; a < 4; ++a) {
    const double cross = (p[0][0] * p[a][1] - p[0][1] * p[a][0]) / (k_f * k_f);
    collinear = collinear && std::abs(cross) <= std::sqrt(tol);
  }
  if (collinear) w.cls = RhombusClass::degenerate;
  else if (w.residual <= thr) w.cls = RhombusClass::paired;
  else w.cls = RhombusClass::unpaired;
  return w;
}

std::string to_string(RhombusClass c) {
  switch (c) {
    case RhombusClass::paired: return "paired";
    case RhombusClass::degenerate: return "degenerate";
    case RhombusClass::unpaired: return "unpaired";
  }
  return "?";
}

std::vector<RhombusSweepRow> rhombus_sweep(const std::vector<double>& tols, std::size_t samples, unsigned long seed) {
  if (samples == 0) throw InputError("sweep needs samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::vector<RhombusSweepRow> out;
  for (double tol : tols) {
    if (!(tol > 0.0 && tol < 1.0)) throw InputError("sweep tolerances must lie in (0, 1)");
    RhombusSweepRow row{tol, samples};
    std::size_t unpaired = 0, degenerate = 0, accepted = 0;
    while (accepted < samples) {
      std::array<Vec2, 4> p;
      Vec2 s{0.0, 0.0};
      for (int a = 0; a < 3; ++a) {
        const double t = angle(rng);
        p[a] = {std::cos(t), std::sin(t)};
        s[0] += p[a][0];
        s[1] += p[a][1];
      }
      const double len = std::hypot(s[0], s[1]);
      if (std::abs(len - 1.0) > tol) continue;
      p[3] = {-s[0] / len, -s[1] / len};
      ++accepted;
      const RhombusWitness w = rhombus_witness(p, 1.0, tol);
      if (w.cls == RhombusClass::unpaired) ++unpaired;
      if (w.cls == RhombusClass::degenerate) ++degenerate;
    }
    row.unpaired_fraction = static_cast<double>(unpaired) / static_cast<double>(samples);
    row.degenerate_fraction = static_cast<double>(degenerate) / static_cast<double>(samples);
    out.push_back(row);
  }
  return out;
}

}  // namespace rgkit::sectors
