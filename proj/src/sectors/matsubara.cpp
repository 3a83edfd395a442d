#include "rgkit/sectors/matsubara.hpp"

#include <cmath>
#include <numbers>

#include "rgkit/errors.hpp"

namespace rgkit::sectors {

namespace {
double frequency(double beta, long n) { return (2.0 * static_cast<double>(n) + 1.0) * std::numbers::pi / beta; }
}  // namespace

std::vector<double> matsubara_frequencies(double beta, long n_window) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (n_window < 0) throw InputError("frequency window must be non-negative");
  std::vector<double> out;
  for (long n = -n_window; n < n_window; ++n) out.push_back(frequency(beta, n));
  return out;
}

std::vector<double> matsubara_frequencies_below(double beta, double k0_max) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  std::vector<double> out;
  const long n_hi = static_cast<long>(std::floor((k0_max * beta / std::numbers::pi - 1.0) / 2.0));
  for (long n = -n_hi - 1; n <= n_hi; ++n) {
    const double k0 = frequency(beta, n);
    if (std::abs(k0) <= k0_max) out.push_back(k0);
  }
  return out;
}

double matsubara_closed_form(double beta, double e, double tau) {
  if (!(tau > 0.0 && tau < beta)) throw InputError("tau must lie in (0, beta)");
  // Written to avoid overflow for either sign of e.
  if (e >= 0.0) return -std::exp(-e * tau) / (1.0 + std::exp(-beta * e));
  return -std::exp(e * (beta - tau)) / (std::exp(beta * e) + 1.0);
}

MatsubaraSum matsubara_sum(double beta, double e, double tau, long n_cut) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (!(tau > 0.0 && tau < beta)) throw InputError("tau must lie in (0, beta)");
  if (n_cut < 0) throw InputError("cutoff must be non-negative");
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  C partial = 0.0, leading = 0.0;
  for (long n = -n_cut - 1; n <= n_cut; ++n) {
    const double k0 = frequency(beta, n);
    const C phase = std::exp(-I * k0 * tau);
    partial += phase / (I * k0 - e);
    leading += phase / (I * k0);
  }
  partial /= beta;
  leading /= beta;
  MatsubaraSum s;
  s.partial = partial;
  // The full leading series sums to -1/2 on (0, beta).
  s.corrected = partial + (C(-0.5) - leading);
  s.error_bound = std::abs(e) * beta / (std::numbers::pi * std::numbers::pi * (2.0 * static_cast<double>(n_cut) + 1.0));
  return s;
}

}  // namespace rgkit::sectors
