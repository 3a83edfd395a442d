#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "rgkit/errors.hpp"
#include "rgkit/numeric/quadrature.hpp"

namespace rgkit::quad {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(std::size_t n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

Rule build_rule(std::size_t n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
  if (n == 0) throw InputError("Gauss-Legendre rule needs at least one node");
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(build_rule(n));
  return *slot;
}

Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t n) {
  const Rule& base = gauss_legendre(n);
  Rule out;
  out.nodes.reserve(panels * n);
  out.weights.reserve(panels * n);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t k = 0; k < n; ++k) {
      out.nodes.push_back(lo + 0.5 * h * (base.nodes[k] + 1.0));
      out.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return out;
}

}  // namespace rgkit::quad
