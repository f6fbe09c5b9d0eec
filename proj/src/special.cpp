#include "macrovar/special.hpp"

#include "macrovar/error.hpp"

#include <cmath>
#include <limits>

namespace macrovar {

namespace {

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

// P(a, x) by the power series, valid for x < a + 1.
double series_p(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the continued fraction (modified Lentz), valid for x >= a + 1.
double fraction_q(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x))
        throw Error(Errc::domain, "incomplete gamma requires a > 0 and x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
    check(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < a + 1.0 ? series_p(a, x) : 1.0 - fraction_q(a, x);
}

double gamma_q(double a, double x) {
    check(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return x < a + 1.0 ? 1.0 - series_p(a, x) : fraction_q(a, x);
}

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace macrovar
