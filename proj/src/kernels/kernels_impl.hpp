#pragma once

#include <cstddef>

namespace macrovar::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double sum_sq_dev_scalar(const double* x, double shift, std::size_t n);
double lagged_dot_scalar(const double* x, std::size_t n, std::size_t lag);

#if defined(MACROVAR_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double sum_sq_dev_avx2(const double* x, double shift, std::size_t n);
double lagged_dot_avx2(const double* x, std::size_t n, std::size_t lag);
#endif

}  // namespace macrovar::kernels::detail
