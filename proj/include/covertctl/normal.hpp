// Standard normal CDF, density, quantile, and the Gaussian tail function
// Q(x) = P{N(0,1) > x} used throughout the detector designs.
#pragma once

namespace covertctl {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, Phi(x) = erfc(-x/sqrt(2))/2.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0,1). Rational-polynomial seed refined by a
/// bracketed Newton iteration; absolute residual below 1e-13.
double normal_quantile(double p);

/// Gaussian tail Q(x) = erfc(x/sqrt(2))/2.
double q_function(double x);

/// Inverse tail function: q_inverse(q_function(x)) == x for p in (0,1).
double q_inverse(double p);

} // namespace covertctl
