#include "covertctl/controllers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace covertctl {

double one_bit_gain(int n, double c1, double bound_b, double a) {
    if (n < 1)
        throw std::invalid_argument("one_bit_gain: n must be >= 1");
    if (a == 2.0)
        throw std::invalid_argument("one_bit_gain: a = 2 makes the gain recursion degenerate");
    if (!(bound_b > 0.0))
        throw std::invalid_argument("one_bit_gain: bound_b must be > 0");
    const double fixed_point = bound_b / (1.0 - a / 2.0);
    if (c1 < fixed_point)
        throw std::invalid_argument("one_bit_gain: requires c1 >= B/(1 - a/2), got c1 = " +
                                    std::to_string(c1) + " < " + std::to_string(fixed_point));
    if (n == 1)
        return c1;
    return fixed_point + std::pow(a / 2.0, n - 1) * (c1 - fixed_point);
}

double one_bit_control(double x_prev, int n, const OneBit &spec, double a) {
    if (n < 2)
        throw std::invalid_argument("one_bit_control: defined for n >= 2 (needs C_{n-1})");
    const double gain = one_bit_gain(n - 1, spec.c1, spec.bound_b, a);
    const double sign = x_prev < 0.0 ? -1.0 : 1.0; // sgn(0) = +1
    return 0.5 * a * gain * sign;
}

EnergyBounds one_bit_energy_bounds(const OneBit &spec, double a) {
    if (a == 2.0)
        throw std::invalid_argument("one_bit_energy_bounds: a = 2 is excluded");
    if (spec.c1 < spec.bound_b / (1.0 - a / 2.0))
        throw std::invalid_argument(
            "one_bit_energy_bounds: requires c1 >= B/(1 - a/2)");
    const double lower = (a * spec.bound_b / (2.0 - a)) * (a * spec.bound_b / (2.0 - a));
    const double upper = (0.5 * a * spec.c1) * (0.5 * a * spec.c1);
    return {lower, upper, lower};
}

double threshold_control(double x_prev, double d, double a) {
    if (!(d > 0.0))
        throw std::invalid_argument("threshold_control: d must be > 0");
    return std::abs(x_prev) >= d ? a * x_prev : 0.0;
}

double gain_change_control(double x_prev, double a, double b) {
    return (a - b) * x_prev;
}

double reset_once_control(double x_tau, double a, double sigma_z, double rng_draw) {
    if (!(std::abs(a) < 1.0))
        throw std::invalid_argument("reset_once_control: requires |a| < 1");
    const double x_tilde = rng_draw * sigma_z / std::sqrt(1.0 - a * a);
    return a * x_tau - a * x_tilde;
}

namespace {

struct Validator {
    const SystemParams &params;

    void operator()(const NoControl &) const {}

    void operator()(const OneBit &c) const {
        const double a = params.gain_a;
        if (!(a > 0.0 && a < 2.0))
            throw std::invalid_argument(
                "OneBit controller: requires 0 < a < 2; the gain recursion "
                "diverges for a >= 2 and oscillates for a <= 0");
        if (!(c.bound_b > 0.0))
            throw std::invalid_argument("OneBit controller: requires bound_b > 0");
        const double fixed_point = c.bound_b / (1.0 - a / 2.0);
        if (c.c1 < fixed_point)
            throw std::invalid_argument("OneBit controller: requires c1 >= B/(1 - a/2) = " +
                                        std::to_string(fixed_point));
    }

    void operator()(const Threshold &c) const {
        if (!(c.d > 0.0))
            throw std::invalid_argument("Threshold controller: requires d > 0");
    }

    void operator()(const GainChange &c) const {
        const double a = params.gain_a;
        const double b = c.b;
        if (std::abs(a) > 1.0) {
            // stabilizing regime: any stable target of matching sign
            if (!(std::abs(b) < 1.0))
                throw std::invalid_argument("GainChange controller: stabilizing an "
                                            "unstable system requires |b| < 1");
            if (a * b <= 0.0)
                throw std::invalid_argument("GainChange controller: requires sgn(a) = sgn(b)");
            return;
        }
        if (!(std::abs(a) > 0.0 && std::abs(a) < std::abs(b) && std::abs(b) < 1.0))
            throw std::invalid_argument(
                "GainChange controller: requires 0 < |a| < |b| < 1");
        if (a * b <= 0.0)
            throw std::invalid_argument("GainChange controller: requires sgn(a) = sgn(b)");
    }

    void operator()(const ResetOnce &c) const {
        if (!(std::abs(params.gain_a) < 1.0))
            throw std::invalid_argument("ResetOnce controller: requires |a| < 1");
        if (!params.stationary_init)
            throw std::invalid_argument(
                "ResetOnce controller: requires stationary initialization");
        if (c.tau < 1)
            throw std::invalid_argument("ResetOnce controller: requires tau >= 1");
    }
};

} // namespace

void validate_controller(const ControllerSpec &spec, const SystemParams &params) {
    std::visit(Validator{params}, spec);
}

} // namespace covertctl
