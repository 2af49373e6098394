// NEON variants of the dense kernels (aarch64 only; NEON is baseline there).
#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cstddef>

namespace covbell::kernels::detail {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double quad_form_neon(const double* M, const double* q, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += q[i] * dot_neon(M + i * n, q, n);
  }
  return s;
}

void matvec_neon(const double* M, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = dot_neon(M + i * cols, x, cols);
  }
}

}  // namespace covbell::kernels::detail

#endif  // __aarch64__ && __ARM_NEON
