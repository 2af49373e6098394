#include "covbell/kernels.hpp"

#include <atomic>

namespace covbell::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double quad_form_scalar(const double* M, const double* q, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = M + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * q[j];
    s += q[i] * acc;
  }
  return s;
}

void matvec_scalar(const double* M, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = M + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

}  // namespace detail

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*quad_form)(const double*, const double*, std::size_t);
  void (*matvec)(const double*, const double*, double*, std::size_t,
                 std::size_t);
};

constexpr Vtable kScalar{detail::dot_scalar, detail::quad_form_scalar,
                         detail::matvec_scalar};
#if defined(__x86_64__) && defined(COVBELL_HAVE_AVX2_TU)
constexpr Vtable kAvx2{detail::dot_avx2, detail::quad_form_avx2,
                       detail::matvec_avx2};
#endif
#if defined(__aarch64__) && defined(COVBELL_HAVE_NEON_TU)
constexpr Vtable kNeon{detail::dot_neon, detail::quad_form_neon,
                       detail::matvec_neon};
#endif

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) && defined(COVBELL_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__) && defined(COVBELL_HAVE_NEON_TU)
      return true;  // NEON is baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Vtable* vtable_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &kScalar;
    case Backend::avx2:
#if defined(__x86_64__) && defined(COVBELL_HAVE_AVX2_TU)
      return &kAvx2;
#else
      return &kScalar;
#endif
    case Backend::neon:
#if defined(__aarch64__) && defined(COVBELL_HAVE_NEON_TU)
      return &kNeon;
#else
      return &kScalar;
#endif
  }
  return &kScalar;
}

struct State {
  std::atomic<Backend> backend;
  std::atomic<const Vtable*> vt;
  State() {
    Backend b = best_backend();
    backend.store(b);
    vt.store(vtable_for(b));
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend best_backend() {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Backend active_backend() { return state().backend.load(); }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "scalar";
}

bool set_backend(Backend b) {
  if (!backend_available(b)) return false;
  state().backend.store(b);
  state().vt.store(vtable_for(b));
  return true;
}

double dot(const double* a, const double* b, std::size_t n) {
  return state().vt.load()->dot(a, b, n);
}

double quad_form(const double* M, const double* q, std::size_t n) {
  return state().vt.load()->quad_form(M, q, n);
}

void matvec(const double* M, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  state().vt.load()->matvec(M, x, y, rows, cols);
}

}  // namespace covbell::kernels
