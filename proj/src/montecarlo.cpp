#include "covertctl/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "covertctl/rng.hpp"

namespace covertctl {

namespace {

constexpr double kWilsonZ = 1.959963984540054; // 95%
constexpr std::uint64_t kSweepLabel = 0x73776565ULL;

double wilson_half_width(long successes, long n) {
    const double z = kWilsonZ;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double denom = 1.0 + z * z / nn;
    return (z / denom) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
}

int resolve_threads(int max_threads) {
    if (max_threads > 0)
        return max_threads;
    if (const char *env = std::getenv("COVERTCTL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace

void validate_config(const ExperimentConfig &cfg) {
    if (cfg.trials < 100)
        throw std::invalid_argument("ExperimentConfig: trials must be >= 100");
    if (cfg.horizon_n < 1)
        throw std::invalid_argument("ExperimentConfig: horizon_n must be >= 1");
    const int need = detector_min_horizon(cfg.detector);
    if (cfg.horizon_n < need)
        throw std::invalid_argument("ExperimentConfig: horizon_n = " +
                                    std::to_string(cfg.horizon_n) +
                                    " is below the detector's minimum horizon " +
                                    std::to_string(need));
    if (const auto *lrt = std::get_if<GaussianLrt>(&cfg.detector);
        lrt && cfg.horizon_n != lrt->dim())
        throw std::invalid_argument("ExperimentConfig: GaussianLrt needs horizon_n equal "
                                    "to the covariance dimension");
    cfg.system.initial_variance(); // validates the stationary flag
    validate_controller(cfg.controller, cfg.system);
}

double error_sum_se(const ErrorRates &rates) {
    const double n = static_cast<double>(rates.trials);
    const double va = rates.alpha_hat * (1.0 - rates.alpha_hat) / n;
    const double vb = rates.beta_hat * (1.0 - rates.beta_hat) / n;
    return std::sqrt(va + vb);
}

ErrorRates estimate_error_rates(const ExperimentConfig &cfg, int max_threads) {
    validate_config(cfg);

    const double sigma_z = cfg.system.noise.std_dev();
    const double gain_a = cfg.system.gain_a;
    const long trials = cfg.trials;

    // hypothesis 0: controller forced off; hypothesis 1: as configured
    const auto trial_rejects = [&](int hypothesis, long index) -> bool {
        const std::uint64_t key =
            derive_stream(derive_stream(cfg.master_seed, static_cast<std::uint64_t>(hypothesis)),
                          static_cast<std::uint64_t>(index));
        const ControllerSpec none = NoControl{};
        const Trajectory traj =
            simulate(cfg.system, hypothesis == 0 ? none : cfg.controller, cfg.horizon_n,
                     key, cfg.sim_options);
        return detector_decide(cfg.detector, traj.states, gain_a, sigma_z).reject_null;
    };

    const int n_threads =
        static_cast<int>(std::min<long>(resolve_threads(max_threads), trials));
    std::atomic<long> reject_h0{0};
    std::atomic<long> accept_h1{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker = [&](long begin, long end) {
        long local_reject = 0;
        long local_accept = 0;
        try {
            for (long i = begin; i < end; ++i) {
                if (trial_rejects(0, i))
                    ++local_reject;
                if (!trial_rejects(1, i))
                    ++local_accept;
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error)
                first_error = std::current_exception();
            return;
        }
        reject_h0 += local_reject;
        accept_h1 += local_accept;
    };

    if (n_threads <= 1) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const long chunk = (trials + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const long begin = t * chunk;
            const long end = std::min(trials, begin + chunk);
            if (begin >= end)
                break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto &th : pool)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    ErrorRates rates;
    rates.trials = trials;
    rates.alpha_hat = static_cast<double>(reject_h0.load()) / static_cast<double>(trials);
    rates.beta_hat = static_cast<double>(accept_h1.load()) / static_cast<double>(trials);
    rates.alpha_ci = wilson_half_width(reject_h0.load(), trials);
    rates.beta_ci = wilson_half_width(accept_h1.load(), trials);
    return rates;
}

namespace {

void apply_parameter(ExperimentConfig &cfg, const std::string &name, double value) {
    const auto as_int = [&](const char *what) {
        const long v = std::lround(value);
        if (static_cast<double>(v) != value)
            throw std::invalid_argument(std::string("sweep: ") + what +
                                        " requires an integer value");
        return v;
    };

    if (name == "trials") {
        cfg.trials = as_int("trials");
    } else if (name == "horizon_n") {
        cfg.horizon_n = static_cast<int>(as_int("horizon_n"));
    } else if (name == "system.gain_a") {
        cfg.system.gain_a = value;
    } else if (name == "system.init_variance") {
        cfg.system.init_variance = value;
    } else if (name == "controller.c1") {
        std::get<OneBit>(cfg.controller).c1 = value;
    } else if (name == "controller.bound_b") {
        std::get<OneBit>(cfg.controller).bound_b = value;
    } else if (name == "controller.d") {
        std::get<Threshold>(cfg.controller).d = value;
    } else if (name == "controller.b") {
        std::get<GainChange>(cfg.controller).b = value;
    } else if (name == "controller.tau") {
        std::get<ResetOnce>(cfg.controller).tau = static_cast<int>(as_int("controller.tau"));
    } else if (name == "detector.m") {
        std::get<MagnitudeSpec>(cfg.detector).m = value;
    } else if (name == "detector.n0") {
        std::get<MagnitudeSpec>(cfg.detector).n0 = static_cast<int>(as_int("detector.n0"));
    } else if (name == "detector.k") {
        std::get<InnovationEnergySpec>(cfg.detector).k = static_cast<int>(as_int("detector.k"));
    } else if (name == "detector.t") {
        if (auto *ie = std::get_if<InnovationEnergySpec>(&cfg.detector))
            ie->t = value;
        else
            std::get<ResetChiSquareSpec>(cfg.detector).t = value;
    } else if (name == "detector.tau") {
        if (auto *cs = std::get_if<ResetChiSquareSpec>(&cfg.detector))
            cs->tau = static_cast<int>(as_int("detector.tau"));
        else
            std::get<ResetQuadraticSpec>(cfg.detector).tau =
                static_cast<int>(as_int("detector.tau"));
    } else if (name == "detector.t_prime") {
        std::get<ResetQuadraticSpec>(cfg.detector).t_prime = value;
    } else {
        throw std::invalid_argument("sweep: unknown parameter '" + name + "'");
    }
}

} // namespace

std::vector<std::pair<double, ErrorRates>> sweep(const ExperimentConfig &cfg_template,
                                                 const std::string &parameter,
                                                 const std::vector<double> &values,
                                                 int max_threads) {
    std::vector<std::pair<double, ErrorRates>> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ExperimentConfig cfg = cfg_template;
        try {
            apply_parameter(cfg, parameter, values[i]);
        } catch (const std::bad_variant_access &) {
            throw std::invalid_argument("sweep: parameter '" + parameter +
                                        "' does not match the configured controller/detector");
        }
        cfg.master_seed =
            derive_stream(derive_stream(cfg_template.master_seed, kSweepLabel), i);
        out.emplace_back(values[i], estimate_error_rates(cfg, max_threads));
    }
    return out;
}

const char *to_string(BoundCheck check) {
    switch (check) {
    case BoundCheck::Consistent:
        return "consistent";
    case BoundCheck::Violated:
        return "violated";
    case BoundCheck::Inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

BoundCheck verify_bound(const ErrorRates &rates, const BoundReport &bound) {
    const double sum = rates.alpha_hat + rates.beta_hat;
    const double slack = 3.0 * error_sum_se(rates);
    if (bound.direction == BoundReport::Direction::Lower) {
        if (sum >= bound.value)
            return BoundCheck::Consistent;
        return sum < bound.value - slack ? BoundCheck::Violated : BoundCheck::Inconclusive;
    }
    if (sum <= bound.value)
        return BoundCheck::Consistent;
    return sum > bound.value + slack ? BoundCheck::Violated : BoundCheck::Inconclusive;
}

} // namespace covertctl
