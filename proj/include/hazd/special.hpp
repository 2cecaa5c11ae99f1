#pragma once

namespace hazd {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);

// log of the binomial coefficient C(n, k)
double log_binom(long n, long k);

// Standard normal cdf
double normal_cdf(double z);

}  // namespace hazd
