#include <cmath>

#include "rgkit/simd/kernels.hpp"

#if defined(RGKIT_HAVE_AVX2_KERNELS)
#include <immintrin.h>
#define RGKIT_AVX2 __attribute__((target("avx2,fma")))
#endif

namespace rgkit::simd::avx2 {

#if defined(RGKIT_HAVE_AVX2_KERNELS)

namespace {

RGKIT_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// exp on lanes known to lie in [-708, 709]: x = n ln2 + r, |r| <= ln2/2,
// degree-13 Taylor polynomial for e^r, then scale by 2^n through the exponent bits.
RGKIT_AVX2 inline __m256d exp_core(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(0.6931471805599453);
  const __m256d ln2_lo = _mm256_set1_pd(2.3190468138462996e-17);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double kInvFact[14] = {1.0,
                                          1.0,
                                          1.0 / 2,
                                          1.0 / 6,
                                          1.0 / 24,
                                          1.0 / 120,
                                          1.0 / 720,
                                          1.0 / 5040,
                                          1.0 / 40320,
                                          1.0 / 362880,
                                          1.0 / 3628800,
                                          1.0 / 39916800,
                                          1.0 / 479001600,
                                          1.0 / 6227020800.0};
  __m256d p = _mm256_set1_pd(kInvFact[13]);
  for (int k = 12; k >= 0; --k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[k]));

  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

}  // namespace

RGKIT_AVX2 void exp(const double* x, double* out, std::size_t n) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d v = _mm256_loadu_pd(x + k);
    __m256d in_range = _mm256_and_pd(_mm256_cmp_pd(v, lo, _CMP_GE_OQ), _mm256_cmp_pd(v, hi, _CMP_LE_OQ));
    if (_mm256_movemask_pd(in_range) == 0xF) {
      _mm256_storeu_pd(out + k, exp_core(v));
    } else {
      scalar::exp(x + k, out + k, 4);
    }
  }
  if (k < n) scalar::exp(x + k, out + k, n - k);
}

RGKIT_AVX2 double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

RGKIT_AVX2 double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

RGKIT_AVX2 std::complex<double> complex_dot(const double* ar, const double* ai, const double* br, const double* bi,
                                            std::size_t n) {
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k);
    const __m256d xi = _mm256_loadu_pd(ai + k);
    const __m256d yr = _mm256_loadu_pd(br + k);
    const __m256d yi = _mm256_loadu_pd(bi + k);
    re = _mm256_fmadd_pd(xr, yr, re);
    re = _mm256_fnmadd_pd(xi, yi, re);
    im = _mm256_fmadd_pd(xr, yi, im);
    im = _mm256_fmadd_pd(xi, yr, im);
  }
  double sr = hsum(re), si = hsum(im);
  for (; k < n; ++k) {
    sr += ar[k] * br[k] - ai[k] * bi[k];
    si += ar[k] * bi[k] + ai[k] * br[k];
  }
  return {sr, si};
}

// Distances use separate mul/add (this file is built with -ffp-contract=off) so the
// boundary test rounds exactly like the scalar reference.
RGKIT_AVX2 double weighted_count_within(const double* x, const double* y, const double* z, const double* w,
                                        std::size_t n, double px, double py, double pz, double r2) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d vpz = _mm256_set1_pd(pz);
  const __m256d vr2 = _mm256_set1_pd(r2);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dx = _mm256_add_pd(vpx, _mm256_loadu_pd(x + k));
    const __m256d dy = _mm256_add_pd(vpy, _mm256_loadu_pd(y + k));
    __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    if (z) {
      const __m256d dz = _mm256_add_pd(vpz, _mm256_loadu_pd(z + k));
      d2 = _mm256_add_pd(d2, _mm256_mul_pd(dz, dz));
    } else {
      d2 = _mm256_add_pd(d2, _mm256_setzero_pd());
    }
    const __m256d mask = _mm256_cmp_pd(d2, vr2, _CMP_LE_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(w + k)));
  }
  double total = hsum(acc);
  if (k < n) total += scalar::weighted_count_within(x + k, y + k, z ? z + k : nullptr, w + k, n - k, px, py, pz, r2);
  return total;
}

#else

void exp(const double* x, double* out, std::size_t n) { scalar::exp(x, out, n); }
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
double sum_squares(const double* a, std::size_t n) { return scalar::sum_squares(a, n); }
std::complex<double> complex_dot(const double* ar, const double* ai, const double* br, const double* bi,
                                 std::size_t n) {
  return scalar::complex_dot(ar, ai, br, bi, n);
}
double weighted_count_within(const double* x, const double* y, const double* z, const double* w, std::size_t n,
                             double px, double py, double pz, double r2) {
  return scalar::weighted_count_within(x, y, z, w, n, px, py, pz, r2);
}

#endif

}  // namespace rgkit::simd::avx2
