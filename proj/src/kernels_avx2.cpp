// AVX2 variants of the dense kernels. This file is compiled with -mavx2 and
// only ever called after a runtime cpuid check (see kernels.cpp).
#if defined(__x86_64__)

#include <immintrin.h>

#include <cstddef>

namespace covbell::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                           _mm256_loadu_pd(b + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double quad_form_avx2(const double* M, const double* q, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += q[i] * dot_avx2(M + i * n, q, n);
  }
  return s;
}

void matvec_avx2(const double* M, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = dot_avx2(M + i * cols, x, cols);
  }
}

}  // namespace covbell::kernels::detail

#endif  // __x86_64__
