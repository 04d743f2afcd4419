// Trajectory simulation under any of the control laws.
#pragma once

#include <cstdint>

#include "covertctl/controllers.hpp"
#include "covertctl/trajectory.hpp"

namespace covertctl {

struct SimOptions {
    /// |X_n| beyond this aborts the run with std::overflow_error.
    double overflow_limit = 1e15;
    /// Unstable systems (|a| > 1) diverge geometrically; runs longer than
    /// this are rejected up front. Raise it deliberately when a controller
    /// keeps the state bounded.
    int unstable_horizon_cap = 200;
};

/// Simulates X_1..X_n from X_0 ~ N(0, sigma_0^2). Controls are produced
/// causally from X_{n-1}. The draw order is fixed: X_0 first, then Z_1..Z_n
/// from the seed's stream; controller-internal draws (the reset variate)
/// come from a derived auxiliary stream, so the noise path is identical
/// across controllers for a given seed.
Trajectory simulate(const SystemParams &params, const ControllerSpec &controller,
                    int n, std::uint64_t seed, const SimOptions &options = {});

} // namespace covertctl
