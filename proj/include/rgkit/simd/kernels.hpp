#pragma once

// Data-parallel inner loops used by the numerical modules. Each kernel has a
// portable scalar reference and an AVX2/FMA variant; the variant is chosen at
// runtime from CPU features and can be pinned for equivalence testing.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace rgkit::simd {

enum class Isa { scalar, avx2 };

bool avx2_supported();
Isa active_isa();
// Pins the dispatch target; requesting avx2 on a CPU without it throws DomainError.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

// Scope guard restoring the previous dispatch target.
class IsaScope {
 public:
  explicit IsaScope(Isa isa) : saved_(active_isa()) { set_isa(isa); }
  ~IsaScope() { set_isa(saved_); }
  IsaScope(const IsaScope&) = delete;
  IsaScope& operator=(const IsaScope&) = delete;

 private:
  Isa saved_;
};

// out[k] = exp(x[k]); inputs below about -708 flush to zero.
void exp(std::span<const double> x, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);

// sum_k (ar[k] + i ai[k]) * (br[k] + i bi[k]), no conjugation.
std::complex<double> complex_dot(std::span<const double> ar, std::span<const double> ai,
                                 std::span<const double> br, std::span<const double> bi);

// Structure-of-arrays point set; z may be empty for planar data.
struct PointsView {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;
  std::span<const double> weight;
};

// sum of weight[k] over points q_k in [begin, end) with |p + q_k|^2 <= r2.
double weighted_count_within(const PointsView& q, std::size_t begin, std::size_t end, double px, double py,
                             double pz, double r2);

namespace scalar {
void exp(const double* x, double* out, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
std::complex<double> complex_dot(const double* ar, const double* ai, const double* br, const double* bi,
                                 std::size_t n);
double weighted_count_within(const double* x, const double* y, const double* z, const double* w, std::size_t n,
                             double px, double py, double pz, double r2);
}  // namespace scalar

namespace avx2 {
void exp(const double* x, double* out, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
std::complex<double> complex_dot(const double* ar, const double* ai, const double* br, const double* bi,
                                 std::size_t n);
double weighted_count_within(const double* x, const double* y, const double* z, const double* w, std::size_t n,
                             double px, double py, double pz, double r2);
}  // namespace avx2

}  // namespace rgkit::simd
