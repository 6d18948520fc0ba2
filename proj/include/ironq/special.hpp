#pragma once

// Scalar special functions used by the kernel/distribution layer. The
// incomplete gamma and beta routines also expose log-scale variants so the
// distribution code can work in deep tails without underflow.

namespace ironq::special {

double log_gamma(double x);

// Regularized lower/upper incomplete gamma: P(a,x), Q(a,x) = 1 - P(a,x).
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);
// log Q(a,x), finite for x where Q underflows.
double log_reg_upper_gamma(double a, double x);

// Regularized incomplete beta I_x(a,b) and its logarithm.
double reg_inc_beta(double a, double b, double x);
double log_reg_inc_beta(double a, double b, double x);

// Standard normal distribution.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_logcdf(double x);
double normal_quantile(double p);

// Modified Bessel K_{1/4}(q), q > 0. Needed by the Cramer-von Mises
// asymptotic distribution.
double bessel_k_quarter(double q);

// log(1 + exp(x)) without overflow.
double log1pexp(double x);

}  // namespace ironq::special
