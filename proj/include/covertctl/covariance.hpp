// Closed-form Gaussian covariance matrices of AR(1) state vectors
// (X_1, ..., X_n):
//
//   general:    Sigma_ij = sigma_Z^2/(1-a^2) (a^|i-j| - a^{i+j}) + sigma_0^2 a^{i+j}
//   stationary: Sigma_ij = sigma_Z^2/(1-a^2) a^|i-j|            (|a| < 1)
//   reset:      blockdiag(Sigma_tau, Sigma_{n-tau})
//
// Indices are 1-based in the formulas above.
#pragma once

#include "covertctl/linalg.hpp"
#include "covertctl/system.hpp"

namespace covertctl {

using CovMatrix = Matrix;

/// Covariance of n states started from X_0 ~ N(0, sigma_0^2). Valid for any
/// |a| != 1, including unstable gains.
CovMatrix state_covariance(const SystemParams &params, int n);

/// Wide-sense stationary covariance; symmetric Toeplitz with first row
/// sigma_Z^2/(1-a^2) * a^k. Requires |a| < 1.
CovMatrix stationary_covariance(double a, double sigma_z, int n);

/// Covariance after one reset to the stationary law at time tau:
/// two stationary blocks of sizes tau and n-tau, zero off-blocks.
CovMatrix reset_covariance(double a, double sigma_z, int n, int tau);

} // namespace covertctl
