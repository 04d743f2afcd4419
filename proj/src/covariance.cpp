#include "covertctl/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace covertctl {

namespace {

void require_dim(int n) {
    if (n < 1)
        throw std::invalid_argument("covariance: n must be >= 1");
}

} // namespace

CovMatrix state_covariance(const SystemParams &params, int n) {
    require_dim(n);
    const double a = params.gain_a;
    if (std::abs(a) == 1.0)
        throw std::invalid_argument("state_covariance: |a| = 1 is not supported "
                                    "(closed form divides by 1 - a^2)");
    const double var_z = params.noise.variance();
    const double var_0 = params.initial_variance();
    const double geo = var_z / (1.0 - a * a);

    CovMatrix cov(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= i; ++j) {
            const double a_abs = std::pow(a, i - j);
            const double a_sum = std::pow(a, i + j);
            const double v = geo * (a_abs - a_sum) + var_0 * a_sum;
            cov(i - 1, j - 1) = v;
            cov(j - 1, i - 1) = v;
        }
    }
    return cov;
}

CovMatrix stationary_covariance(double a, double sigma_z, int n) {
    require_dim(n);
    if (!(std::abs(a) < 1.0))
        throw std::invalid_argument("stationary_covariance: requires |a| < 1");
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("stationary_covariance: sigma_z must be > 0");
    const double scale = sigma_z * sigma_z / (1.0 - a * a);

    CovMatrix cov(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = scale * std::pow(a, i - j);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

CovMatrix reset_covariance(double a, double sigma_z, int n, int tau) {
    require_dim(n);
    if (tau < 1 || tau >= n)
        throw std::invalid_argument("reset_covariance: tau must lie in [1, n-1]");
    const CovMatrix head = stationary_covariance(a, sigma_z, tau);
    const CovMatrix tail = stationary_covariance(a, sigma_z, n - tau);

    CovMatrix cov(n, n);
    for (int i = 0; i < tau; ++i)
        for (int j = 0; j < tau; ++j)
            cov(i, j) = head(i, j);
    for (int i = 0; i < n - tau; ++i)
        for (int j = 0; j < n - tau; ++j)
            cov(tau + i, tau + j) = tail(i, j);
    return cov;
}

} // namespace covertctl
