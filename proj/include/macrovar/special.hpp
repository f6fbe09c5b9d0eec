#pragma once

namespace macrovar {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x),
// a > 0, x >= 0. Series expansion below x = a + 1, Lentz continued fraction
// above; each branch returns its tail directly so neither loses relative
// accuracy to cancellation.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail chi-square probability P(X > x), X ~ chi2(df).
double chi2_sf(double x, double df);

}  // namespace macrovar
