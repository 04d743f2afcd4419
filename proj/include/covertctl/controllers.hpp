// Alice's control laws.
//
//   one-bit:     U_n = (a/2) C_{n-1} sgn(X_{n-1}),  C_n = (a/2) C_{n-1} + B
//   threshold:   U_n = a X_{n-1} when |X_{n-1}| >= D, else 0
//   gain change: U_n = (a - b) X_{n-1}, closed loop X_n = b X_{n-1} + Z_n
//   reset once:  U_{tau+1} = a X_tau - a Xtilde, Xtilde fresh stationary
//
// All laws are pure functions; randomness (the reset draw) is passed in by
// the caller so controllers stay stream-agnostic.
#pragma once

#include <variant>

#include "covertctl/system.hpp"

namespace covertctl {

struct NoControl {};

struct OneBit {
    double c1;      ///< initial gain C_1, must be >= B / (1 - a/2)
    double bound_b; ///< noise support bound B the gain sequence is built for
};

struct Threshold {
    double d; ///< reset level D > 0; |X| >= D resets to zero state
};

struct GainChange {
    double b; ///< target closed-loop gain
};

struct ResetOnce {
    int tau; ///< deterministic reset time; control acts at step tau + 1
};

using ControllerSpec = std::variant<NoControl, OneBit, Threshold, GainChange, ResetOnce>;

/// Checks a controller against the system it is to run on; throws
/// std::invalid_argument naming the violated inequality.
void validate_controller(const ControllerSpec &spec, const SystemParams &params);

/// Closed form of the one-bit gain recursion:
/// C_n = B/(1-a/2) + (a/2)^{n-1} (C_1 - B/(1-a/2)). C_1 itself for n = 1.
double one_bit_gain(int n, double c1, double bound_b, double a);

/// One-bit control at step n >= 2: (a/2) C_{n-1} sgn(x_prev), sgn(0) = +1.
double one_bit_control(double x_prev, int n, const OneBit &spec, double a);

struct EnergyBounds {
    double lower;        ///< (aB/(2-a))^2, attained at the fixed-point C_1
    double upper;        ///< ((a/2) C_1)^2
    double steady_state; ///< equals lower
};

/// Time-averaged energy limits of the one-bit law.
EnergyBounds one_bit_energy_bounds(const OneBit &spec, double a);

/// Threshold law: a*x_prev when |x_prev| >= d, else 0 (boundary resets).
double threshold_control(double x_prev, double d, double a);

/// Gain-change law: (a - b) * x_prev.
double gain_change_control(double x_prev, double a, double b);

/// Reset-to-stationary control: a*x_tau - a*xtilde with
/// xtilde = rng_draw * sigma_z / sqrt(1 - a^2); rng_draw is a standard
/// normal variate supplied by the caller's stream.
double reset_once_control(double x_tau, double a, double sigma_z, double rng_draw);

} // namespace covertctl
