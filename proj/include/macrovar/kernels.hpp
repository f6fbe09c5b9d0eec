#pragma once

// Dense double-precision inner loops shared by the estimators.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active table is chosen once at first use from the
// CPU feature bits; MACROVAR_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace macrovar::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // sum_i (x[i] - shift)^2
    double (*sum_sq_dev)(const double* x, double shift, std::size_t n);
    // sum_{t=lag}^{n-1} x[t] * x[t-lag]
    double (*lagged_dot)(const double* x, std::size_t n, std::size_t lag);
};

const KernelTable& scalar_table() noexcept;

// Null when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

// Table used by the library; resolved once.
const KernelTable& active() noexcept;

std::string_view isa_name(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum_sq_dev(std::span<const double> x, double shift = 0.0) {
    return active().sum_sq_dev(x.data(), shift, x.size());
}

inline double lagged_dot(std::span<const double> x, std::size_t lag) {
    return active().lagged_dot(x.data(), x.size(), lag);
}

}  // namespace macrovar::kernels
