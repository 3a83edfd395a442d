#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rgkit::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Evaluates f at every abscissa of x, writing into y (same length).
using BatchIntegrand = std::function<void(std::span<const double> x, std::span<double> y)>;
using Integrand = std::function<double(double)>;

// Globally adaptive 21-point Gauss-Kronrod on [a, b] (finite).
Result integrate(const BatchIntegrand& f, double a, double b, const Options& opt = {});
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

// [a, +inf) through x = a + t/(1-t).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opt = {});
// (-inf, +inf) through x = t/(1-t^2).
Result integrate_real_line(const Integrand& f, const Options& opt = {});

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(std::size_t n);

// Composite rule: `panels` equal panels of an n-point Gauss-Legendre rule on [a, b].
Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t n);

}  // namespace rgkit::quad
