#pragma once

#include <cstddef>
#include <string>

// Small dense kernels used in the optimizer hot loops (weight-space objective
// evaluation is many short dot products and one quadratic form per call).
// A scalar reference implementation always exists; AVX2 / NEON variants are
// compiled in separate translation units and picked at runtime.

namespace covbell::kernels {

enum class Backend { scalar, avx2, neon };

// Backend active for subsequent dot/quad_form/matvec calls.
Backend active_backend();
const char* backend_name(Backend b);

// Returns false when the requested backend is not compiled in or the CPU
// lacks the feature; the active backend is left unchanged in that case.
bool set_backend(Backend b);

// Best backend this CPU supports (what the library selects at startup).
Backend best_backend();

double dot(const double* a, const double* b, std::size_t n);

// q^T M q with M row-major n*n.
double quad_form(const double* M, const double* q, std::size_t n);

// y = M x with M row-major rows*cols.
void matvec(const double* M, const double* x, double* y, std::size_t rows,
            std::size_t cols);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double quad_form_scalar(const double* M, const double* q, std::size_t n);
void matvec_scalar(const double* M, const double* x, double* y,
                   std::size_t rows, std::size_t cols);
#if defined(__x86_64__)
double dot_avx2(const double* a, const double* b, std::size_t n);
double quad_form_avx2(const double* M, const double* q, std::size_t n);
void matvec_avx2(const double* M, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
#endif
#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t n);
double quad_form_neon(const double* M, const double* q, std::size_t n);
void matvec_neon(const double* M, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
#endif
}  // namespace detail

}  // namespace covbell::kernels
