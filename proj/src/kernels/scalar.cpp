#include "kernels_impl.hpp"

namespace macrovar::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_sq_dev_scalar(const double* x, double shift, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - shift;
        s += d * d;
    }
    return s;
}

double lagged_dot_scalar(const double* x, std::size_t n, std::size_t lag) {
    if (lag >= n) return 0.0;
    return dot_scalar(x + lag, x, n - lag);
}

}  // namespace macrovar::kernels::detail
