// The AR(1) plant: X_{n+1} = a X_n + Z_n - U_n.
#pragma once

#include <cmath>
#include <stdexcept>

#include "covertctl/noise.hpp"

namespace covertctl {

struct SystemParams {
    double gain_a = 0.0;
    NoiseModel noise = NoiseModel::gaussian(1.0);
    double init_variance = 0.0;   ///< Var[X_0]; overridden by stationary_init
    bool stationary_init = false; ///< X_0 ~ N(0, sigma_Z^2 / (1 - a^2)); needs |a| < 1

    /// Effective Var[X_0] after resolving the stationary flag.
    double initial_variance() const {
        if (stationary_init) {
            if (!(std::abs(gain_a) < 1.0))
                throw std::invalid_argument(
                    "SystemParams: stationary_init requires |a| < 1");
            return noise.variance() / (1.0 - gain_a * gain_a);
        }
        if (init_variance < 0.0)
            throw std::invalid_argument("SystemParams: init_variance must be >= 0");
        return init_variance;
    }
};

/// One plant step: a*x + z - u.
inline double step(double x, const SystemParams &params, double z, double u) {
    return params.gain_a * x + z - u;
}

} // namespace covertctl
