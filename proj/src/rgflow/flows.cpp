#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgkit/errors.hpp"
#include "rgkit/numeric/quadrature.hpp"
#include "rgkit/rgflow/rgflow.hpp"

namespace rgkit::rgflow {

std::string to_string(FlowKind k) {
  return k == FlowKind::stable_phi4 ? "stable-phi4" : "asymptotically-free";
}

std::string to_string(Direction d) { return d == Direction::upward ? "upward" : "downward"; }

Trajectory flow_stable_phi4(double lambda, double beta, std::size_t steps, double threshold, Direction direction) {
  if (lambda < 0.0) throw InputError("coupling must be non-negative");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (!(threshold > 0.0)) throw InputError("blow-up threshold must be positive");
  Trajectory t;
  t.kind = FlowKind::stable_phi4;
  t.direction = direction;
  t.beta = beta;
  t.predicted_index = lambda > 0.0 ? 1.0 / (beta * lambda) : INFINITY;
  if (direction == Direction::upward) {
    const double stop = std::max(threshold, 1e3);
    t.lambda.push_back(lambda);
    for (std::size_t i = 1; i <= steps; ++i) {
      const double prev = t.lambda.back();
      const double next = prev + beta * prev * prev;
      t.lambda.push_back(next);
      if (!t.blowup && next > threshold) {
        t.blowup = true;
        t.blowup_index = i;
      }
      if (t.index_above_1e3 == 0 && next > 1e3) t.index_above_1e3 = i;
      if (next > stop && t.blowup) break;
    }
    return t;
  }
  // Downward: lambda is bare at i = steps; lambda_{i-1} is the positive root of x + beta x^2 = lambda_i.
  std::vector<double> rev{lambda};
  for (std::size_t i = steps; i > 0; --i) {
    const double cur = rev.back();
    rev.push_back(2.0 * cur / (1.0 + std::sqrt(1.0 + 4.0 * beta * cur)));
  }
  t.lambda.assign(rev.rbegin(), rev.rend());
  t.predicted_index = t.lambda.front() > 0.0 ? 1.0 / (beta * t.lambda.front()) : INFINITY;
  return t;
}

Trajectory flow_asymptotically_free(double lambda0, double beta, double gamma, std::size_t steps) {
  if (!(lambda0 > 0.0)) throw InputError("lambda_0 must be positive");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  Trajectory t;
  t.kind = FlowKind::asymptotically_free;
  t.beta = beta;
  t.gamma = gamma;
  t.lambda.push_back(lambda0);
  t.second_order.push_back(lambda0);
  t.third_order.push_back(lambda0);
  double inv = 1.0 / lambda0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double di = static_cast<double>(i);
    inv += beta;
    if (i > 1) inv += gamma * std::log(di / (di - 1.0));
    t.lambda.push_back(1.0 / inv);
    t.second_order.push_back(lambda0 / (1.0 + lambda0 * beta * di));
    t.third_order.push_back(lambda0 / (1.0 + lambda0 * (beta * di + gamma * std::log(di))));
  }
  return t;
}

std::vector<RenormalonRow> renormalon_growth(std::size_t n_max, double m2) {
  if (n_max > 20) throw GuardError("renormalon probe limited to n_max <= 20");
  if (!(m2 > 0.0)) throw DomainError("renormalon integral needs m^2 > 0");
  const double omega3 = 2.0 * std::numbers::pi * std::numbers::pi;
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-12;
  opt.max_intervals = 4000;
  // q = e^u: I_n = Omega_3 int u^n e^{4u} / (e^{2u} + m^2)^3 du.
  auto moment = [&](std::size_t n, bool with_log) {
    const double shift = 0.5 * std::log(m2);
    auto f = [&](std::span<const double> u, std::span<double> y) {
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double e2 = std::exp(2.0 * u[k]);
        const double base = std::exp(4.0 * u[k]) / std::pow(e2 + m2, 3.0);
        y[k] = with_log ? std::pow(u[k], static_cast<double>(n)) * base : base;
      }
    };
    const double dn = static_cast<double>(n);
    const double lo = shift - 30.0 - 2.0 * dn, hi = shift + 40.0 + 3.0 * dn;
    double s = 0.0;
    // Peaks near u ~ n/2 (right tail) and u ~ -n/4 (left tail): split at the origin.
    const double mid = std::clamp(0.0, lo, hi);
    s += quad::integrate(quad::BatchIntegrand(f), lo, mid, opt).value;
    s += quad::integrate(quad::BatchIntegrand(f), mid, hi, opt).value;
    return omega3 * s;
  };
  std::vector<RenormalonRow> rows;
  for (std::size_t n = 0; n <= n_max; ++n) {
    RenormalonRow r;
    r.n = n;
    r.value = moment(n, true);
    r.plain_value = moment(n, false);
    if (n >= 1) {
      r.ratio = r.value / (static_cast<double>(n) * rows.back().value);
      r.plain_ratio = r.plain_value / (static_cast<double>(n) * rows.back().plain_value);
    }
    rows.push_back(r);
  }
  return rows;
}

double plateau_drift(const std::vector<RenormalonRow>& rows, std::size_t lo, std::size_t hi) {
  if (lo < 2 || hi >= rows.size() || lo > hi) throw InputError("plateau window outside the computed rows");
  double drift = 0.0;
  for (std::size_t n = lo; n <= hi; ++n)
    drift = std::max(drift, std::abs(rows[n].ratio - rows[n - 1].ratio) / std::abs(rows[n].ratio));
  return drift;
}

}  // namespace rgkit::rgflow
