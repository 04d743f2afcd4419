#include "covertctl/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "covertctl/rng.hpp"

namespace covertctl {

namespace {

constexpr std::uint64_t kAuxStreamLabel = 0x61757820ULL; // controller-internal draws

} // namespace

Trajectory simulate(const SystemParams &params, const ControllerSpec &controller,
                    int n, std::uint64_t seed, const SimOptions &options) {
    if (n < 1)
        throw std::invalid_argument("simulate: n must be >= 1");
    if (std::abs(params.gain_a) > 1.0 && n > options.unstable_horizon_cap)
        throw std::invalid_argument(
            "simulate: |a| > 1 runs are capped at the unstable horizon (" +
            std::to_string(options.unstable_horizon_cap) +
            "); raise SimOptions::unstable_horizon_cap to override");
    validate_controller(controller, params);
    if (const auto *reset = std::get_if<ResetOnce>(&controller);
        reset && reset->tau + 1 > n)
        throw std::invalid_argument("simulate: ResetOnce needs tau + 1 <= n, the reset "
                                    "never fires inside the horizon otherwise");

    const double sigma_0 = std::sqrt(params.initial_variance());
    const double a = params.gain_a;

    CounterRng noise_rng(seed);
    CounterRng aux_rng(derive_stream(seed, kAuxStreamLabel));

    Trajectory traj;
    traj.seed = seed;
    traj.states.resize(n);
    traj.controls.resize(n);
    traj.initial_state = sigma_0 * noise_rng.next_standard_normal();

    double x_prev = traj.initial_state;
    for (int step_idx = 1; step_idx <= n; ++step_idx) {
        const double z = params.noise.sample(noise_rng);

        double u = 0.0;
        if (const auto *one_bit = std::get_if<OneBit>(&controller)) {
            if (step_idx >= 2) // C_{n-1} exists from step 2 on
                u = one_bit_control(x_prev, step_idx, *one_bit, a);
        } else if (const auto *threshold = std::get_if<Threshold>(&controller)) {
            u = threshold_control(x_prev, threshold->d, a);
            if (u != 0.0 && step_idx >= 2)
                traj.crossing_times.push_back(step_idx - 1);
        } else if (const auto *gain_change = std::get_if<GainChange>(&controller)) {
            u = gain_change_control(x_prev, a, gain_change->b);
        } else if (const auto *reset = std::get_if<ResetOnce>(&controller)) {
            if (step_idx == reset->tau + 1) {
                u = reset_once_control(x_prev, a, params.noise.std_dev(),
                                       aux_rng.next_standard_normal());
                traj.crossing_times.push_back(reset->tau);
            }
        }

        const double x = step(x_prev, params, z, u);
        if (std::abs(x) > options.overflow_limit)
            throw std::overflow_error("simulate: |X_n| exceeded " +
                                      std::to_string(options.overflow_limit) +
                                      " at n = " + std::to_string(step_idx));
        traj.states[step_idx - 1] = x;
        traj.controls[step_idx - 1] = u;
        x_prev = x;
    }
    return traj;
}

} // namespace covertctl
