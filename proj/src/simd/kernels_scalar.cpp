#include <cmath>

#include "rgkit/simd/kernels.hpp"

namespace rgkit::simd::scalar {

void exp(const double* x, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = x[k] < -708.0 ? 0.0 : std::exp(x[k]);
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

std::complex<double> complex_dot(const double* ar, const double* ai, const double* br, const double* bi,
                                 std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += ar[k] * br[k] - ai[k] * bi[k];
    im += ar[k] * bi[k] + ai[k] * br[k];
  }
  return {re, im};
}

double weighted_count_within(const double* x, const double* y, const double* z, const double* w, std::size_t n,
                             double px, double py, double pz, double r2) {
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = px + x[k];
    const double dy = py + y[k];
    const double dz = z ? pz + z[k] : 0.0;
    if (dx * dx + dy * dy + dz * dz <= r2) total += w[k];
  }
  return total;
}

}  // namespace rgkit::simd::scalar
