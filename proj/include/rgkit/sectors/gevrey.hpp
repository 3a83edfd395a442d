#pragma once

#include <cstddef>
#include <span>

namespace rgkit::sectors {

// Flat-top cutoff u with u = 1 on |r| <= 1, u = 0 on |r| >= 2, and the transition
// 1/(1 + exp((2-|r|)^{-p} - (|r|-1)^{-p})), p = 1/(1-alpha).
class Gevrey {
 public:
  Gevrey(double alpha, double M);

  double alpha() const { return alpha_; }
  double M() const { return M_; }
  double exponent() const { return p_; }

  double u(double r) const;
  // Slice pieces: u_0 = 1 - u(r), u_i = u(M^{2(i-1)} r) - u(M^{2i} r).
  double u_slice(std::size_t i, double r) const;
  // Sector pieces inside slice i: v_0 = 1 - u(M^2 r), v_s = u_{s+1}, v_i = u(M^{2i} r).
  double v_sector(std::size_t s, std::size_t i, double r) const;

  // sum_{i=0}^{I+1} u_i(r): equals 1 for r >= M^{-2I}.
  double partition_sum(double r, std::size_t I) const;

  // Batched u(scale * r[k]) through the dispatched exp kernel.
  void u_batch(std::span<const double> r, double scale, std::span<double> out) const;
  void u_slice_batch(std::size_t i, std::span<const double> r, std::span<double> out) const;

 private:
  double alpha_;
  double M_;
  double p_;
};

// E(log(M sqrt2 / (pi T)) / log M), the last slice at temperature T.
long i_max(double T, double M);

}  // namespace rgkit::sectors
