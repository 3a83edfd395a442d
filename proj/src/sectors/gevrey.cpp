#include "rgkit/sectors/gevrey.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "rgkit/errors.hpp"
#include "rgkit/simd/kernels.hpp"

namespace rgkit::sectors {

Gevrey::Gevrey(double alpha, double M) : alpha_(alpha), M_(M) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("Gevrey order alpha must lie in (0,1)");
  if (!(M > 1.0)) throw InputError("scale ratio M must exceed 1");
  p_ = 1.0 / (1.0 - alpha);
}

double Gevrey::u(double r) const {
  const double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double e = std::pow(2.0 - a, -p_) - std::pow(a - 1.0, -p_);
  return 1.0 / (1.0 + std::exp(e));
}

double Gevrey::u_slice(std::size_t i, double r) const {
  if (i == 0) return 1.0 - u(r);
  const double lo = std::pow(M_, 2.0 * static_cast<double>(i - 1));
  return u(lo * r) - u(lo * M_ * M_ * r);
}

double Gevrey::v_sector(std::size_t s, std::size_t i, double r) const {
  if (s > i) throw InputError("sector index exceeds its slice");
  if (i == 0) return 1.0;
  if (s == i) return u(std::pow(M_, 2.0 * static_cast<double>(i)) * r);
  if (s == 0) return 1.0 - u(M_ * M_ * r);
  return u_slice(s + 1, r);
}

double Gevrey::partition_sum(double r, std::size_t I) const {
  double s = 0.0;
  for (std::size_t i = 0; i <= I + 1; ++i) s += u_slice(i, r);
  return s;
}

void Gevrey::u_batch(std::span<const double> r, double scale, std::span<double> out) const {
  if (out.size() != r.size()) throw InputError("u_batch size mismatch");
  std::vector<double> arg(r.size(), 0.0);
  std::vector<std::size_t> live;
  live.reserve(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double a = std::abs(scale * r[k]);
    if (a <= 1.0) out[k] = 1.0;
    else if (a >= 2.0) out[k] = 0.0;
    else {
      arg[live.size()] = std::pow(2.0 - a, -p_) - std::pow(a - 1.0, -p_);
      live.push_back(k);
    }
  }
  if (live.empty()) return;
  std::vector<double> ex(live.size());
  simd::exp(std::span<const double>(arg.data(), live.size()), ex);
  for (std::size_t q = 0; q < live.size(); ++q) out[live[q]] = 1.0 / (1.0 + ex[q]);
}

void Gevrey::u_slice_batch(std::size_t i, std::span<const double> r, std::span<double> out) const {
  if (i == 0) {
    u_batch(r, 1.0, out);
    for (double& v : out) v = 1.0 - v;
    return;
  }
  const double lo = std::pow(M_, 2.0 * static_cast<double>(i - 1));
  std::vector<double> inner(r.size());
  u_batch(r, lo, out);
  u_batch(r, lo * M_ * M_, inner);
  for (std::size_t k = 0; k < r.size(); ++k) out[k] -= inner[k];
}

long i_max(double T, double M) {
  if (!(T > 0.0)) throw InputError("temperature must be positive");
  if (!(M > 1.0)) throw InputError("scale ratio M must exceed 1");
  const double x = std::log(M * std::numbers::sqrt2 / (std::numbers::pi * T)) / std::log(M);
  // Exact powers land a hair below the integer in floating point.
  return static_cast<long>(std::floor(x + 1e-9));
}

}  // namespace rgkit::sectors
