// Independent cross-validation routes for the closed forms. Everything here
// is assembled from first principles (explicit accumulation matrices,
// Gauss-Jordan inverses, Cholesky factorizations) and never calls the
// closed-form entry points it is used to check.
#pragma once

#include <vector>

#include "covertctl/linalg.hpp"
#include "covertctl/system.hpp"

namespace covertctl::oracle {

/// Lower-triangular accumulation matrix [A]_ij = a^{i-j} for i >= j.
Matrix lower_accumulator(double a, int n);

/// Column vector [a, a^2, ..., a^n] as an n x 1 matrix.
Matrix gain_powers(double a, int n);

/// sigma_z^2 A A' + sigma_0^2 a~ a~' assembled by dense products.
Matrix dense_state_covariance(double a, double sigma_z, double sigma0_sq, int n);

/// Dense symmetric Toeplitz sigma_z^2/(1-a^2) a^|i-j| built entrywise.
Matrix dense_stationary_covariance(double a, double sigma_z, int n);

/// Block-diagonal reset covariance built from dense_stationary_covariance.
Matrix dense_reset_covariance(double a, double sigma_z, int n, int tau);

/// Gauss-Jordan inverse with partial pivoting; independent of Cholesky.
Matrix gauss_jordan_inverse(const Matrix &m);

struct VerifyGrid {
    std::vector<double> gains_a;
    std::vector<double> gains_b; // trace oracle only
    std::vector<int> sizes;
    std::vector<double> sigmas;
};

/// Default desk-scale grid: stable gains to +-0.95, unstable checks at small
/// n where double precision holds the 1e-9 contract.
VerifyGrid default_grid();

/// Each suite returns the largest absolute deviation between the closed
/// form and its dense route over the grid.
double verify_covariance(const VerifyGrid &grid);
double verify_trace(const VerifyGrid &grid);
double verify_logdet(const VerifyGrid &grid);
double verify_inverse(const VerifyGrid &grid);
double verify_kl(const VerifyGrid &grid);

} // namespace covertctl::oracle
