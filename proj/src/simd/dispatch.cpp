#include <atomic>
#include <cstdlib>
#include <cstring>

#include "rgkit/errors.hpp"
#include "rgkit/simd/kernels.hpp"

namespace rgkit::simd {

namespace {

Isa detect() {
#if defined(RGKIT_HAVE_AVX2_KERNELS)
  if (const char* env = std::getenv("RGKIT_FORCE_SCALAR"); env && std::strcmp(env, "0") != 0) return Isa::scalar;
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw InputError("kernel operand length mismatch");
}

}  // namespace

bool avx2_supported() {
#if defined(RGKIT_HAVE_AVX2_KERNELS)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_supported()) throw DomainError("AVX2 kernels requested but not supported here");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void exp(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size());
  if (active_isa() == Isa::avx2) avx2::exp(x.data(), out.data(), x.size());
  else scalar::exp(x.data(), out.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active_isa() == Isa::avx2 ? avx2::dot(a.data(), b.data(), a.size()) : scalar::dot(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) {
  return active_isa() == Isa::avx2 ? avx2::sum_squares(a.data(), a.size()) : scalar::sum_squares(a.data(), a.size());
}

std::complex<double> complex_dot(std::span<const double> ar, std::span<const double> ai,
                                 std::span<const double> br, std::span<const double> bi) {
  check_sizes(ar.size(), ai.size());
  check_sizes(ar.size(), br.size());
  check_sizes(ar.size(), bi.size());
  if (active_isa() == Isa::avx2) return avx2::complex_dot(ar.data(), ai.data(), br.data(), bi.data(), ar.size());
  return scalar::complex_dot(ar.data(), ai.data(), br.data(), bi.data(), ar.size());
}

double weighted_count_within(const PointsView& q, std::size_t begin, std::size_t end, double px, double py,
                             double pz, double r2) {
  if (end < begin || end > q.x.size()) throw InputError("point range out of bounds");
  const double* z = q.z.empty() ? nullptr : q.z.data() + begin;
  const std::size_t n = end - begin;
  if (active_isa() == Isa::avx2)
    return avx2::weighted_count_within(q.x.data() + begin, q.y.data() + begin, z, q.weight.data() + begin, n, px, py,
                                       pz, r2);
  return scalar::weighted_count_within(q.x.data() + begin, q.y.data() + begin, z, q.weight.data() + begin, n, px, py,
                                       pz, r2);
}

}  // namespace rgkit::simd
