// Seeded trial harness estimating (alpha, beta) for a
// (system, controller, detector) triple. Trials are keyed by
// (master_seed, hypothesis, trial_index), so results are identical for any
// execution order or thread count.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covertctl/analysis.hpp"
#include "covertctl/detectors.hpp"
#include "covertctl/simulate.hpp"

namespace covertctl {

struct ExperimentConfig {
    SystemParams system;
    ControllerSpec controller;
    DetectorSpec detector;
    long trials = 0;   ///< per hypothesis; at least 100
    int horizon_n = 0; ///< trajectory length; must cover the detector
    std::uint64_t master_seed = 0;
    std::optional<double> moment_bound_c; ///< gamma-moment budget (magnitude runs)
    std::optional<double> gamma;
    SimOptions sim_options;
};

/// Throws std::invalid_argument when the config violates its invariants.
void validate_config(const ExperimentConfig &cfg);

struct ErrorRates {
    double alpha_hat = 0.0; ///< H0 rejection rate (false alarm)
    double beta_hat = 0.0;  ///< H1 acceptance rate (miss)
    double alpha_ci = 0.0;  ///< 95% Wilson half-width
    double beta_ci = 0.0;
    long trials = 0;

    bool operator==(const ErrorRates &) const = default;
};

/// Standard error of alpha_hat + beta_hat under independent binomials.
double error_sum_se(const ErrorRates &rates);

/// Runs `trials` H0 simulations (controller forced off) and `trials` H1
/// simulations (configured controller), applying the detector to each.
/// `max_threads` 0 means COVERTCTL_THREADS or the hardware count.
ErrorRates estimate_error_rates(const ExperimentConfig &cfg, int max_threads = 0);

/// Re-runs the estimate for each value of one numeric config field
/// (e.g. "controller.b", "detector.t", "system.gain_a", "trials").
/// Seeds are decorrelated across values by index.
std::vector<std::pair<double, ErrorRates>> sweep(const ExperimentConfig &cfg_template,
                                                 const std::string &parameter,
                                                 const std::vector<double> &values,
                                                 int max_threads = 0);

enum class BoundCheck { Consistent, Violated, Inconclusive };

const char *to_string(BoundCheck check);

/// Compares alpha_hat + beta_hat against a bound with a 3-standard-error
/// slack band: Consistent when the sum respects the bound's direction,
/// Violated when it breaches by more than 3 SE, Inconclusive in between.
BoundCheck verify_bound(const ErrorRates &rates, const BoundReport &bound);

} // namespace covertctl
