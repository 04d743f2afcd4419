#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "covertctl/config.hpp"
#include "covertctl/covariance.hpp"
#include "covertctl/io.hpp"
#include "covertctl/oracles.hpp"
#include "covertctl/rng.hpp"
#include "covertctl/simulate.hpp"

using namespace covertctl;

TEST_SUITE_BEGIN("ar1_core");

namespace {

SystemParams gaussian_system(double a, double sigma_z, double init_var,
                             bool stationary = false) {
    return {a, NoiseModel::gaussian(sigma_z), init_var, stationary};
}

// Replays the simulator's draw order and accumulates the explicit state
// representation X_n = a^n X_0 + sum a^{n-k} (Z_k - U_k) term by term.
std::vector<double> accumulation_oracle(const SystemParams &params, int n,
                                        std::uint64_t seed,
                                        const std::vector<double> &controls) {
    CounterRng rng(seed);
    const double x0 = std::sqrt(params.initial_variance()) * rng.next_standard_normal();
    std::vector<double> noise(n);
    for (int k = 0; k < n; ++k)
        noise[k] = params.noise.sample(rng);

    const double a = params.gain_a;
    std::vector<double> states(n);
    for (int i = 1; i <= n; ++i) {
        double x = std::pow(a, i) * x0;
        for (int k = 1; k <= i; ++k)
            x += std::pow(a, i - k) * (noise[k - 1] - controls[k - 1]);
        states[i - 1] = x;
    }
    return states;
}

} // namespace

TEST_CASE("step is the plain affine update") {
    CHECK(step(0.0, gaussian_system(0.7, 1.0, 0.0), 0.0, 0.0) == 0.0);
    CHECK(step(1.0, gaussian_system(0.5, 1.0, 0.0), 0.25, 0.0) == doctest::Approx(0.75));
    CHECK(step(2.0, gaussian_system(0.9, 1.0, 0.0), -0.3, 1.5) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("simulate matches the closed-form state representation") {
    SUBCASE("stable gains, long horizon") {
        for (double a : {0.0, 0.5, -0.5, 0.9, -0.9, 1.0}) {
            const SystemParams params = gaussian_system(a, 1.0, 0.7);
            const Trajectory traj = simulate(params, NoControl{}, 200, 7);
            const auto oracle_states =
                accumulation_oracle(params, 200, 7, traj.controls);
            for (int i = 0; i < 200; ++i)
                CHECK(std::abs(traj.states[i] - oracle_states[i]) < 1e-9);
        }
    }
    SUBCASE("unstable gains at horizons where doubles hold 1e-9 absolute") {
        for (double a : {1.2, -1.2, 1.5, -1.5}) {
            const SystemParams params = gaussian_system(a, 1.0, 0.3);
            const Trajectory traj = simulate(params, NoControl{}, 30, 17);
            const auto oracle_states = accumulation_oracle(params, 30, 17, traj.controls);
            for (int i = 0; i < 30; ++i)
                CHECK(std::abs(traj.states[i] - oracle_states[i]) < 1e-9);
        }
    }
    SUBCASE("unstable gain, longer horizon, relative agreement") {
        const SystemParams params = gaussian_system(1.5, 1.0, 0.3);
        const Trajectory traj = simulate(params, NoControl{}, 60, 21);
        const auto oracle_states = accumulation_oracle(params, 60, 21, traj.controls);
        for (int i = 0; i < 60; ++i) {
            const double scale = std::max(1.0, std::abs(oracle_states[i]));
            CHECK(std::abs(traj.states[i] - oracle_states[i]) / scale < 1e-12);
        }
    }
}

TEST_CASE("memoryless simulation returns the raw noise draws") {
    const SystemParams params = gaussian_system(0.0, 1.0, 0.0);
    const Trajectory traj = simulate(params, NoControl{}, 3, 5);
    CounterRng rng(5);
    rng.next_standard_normal(); // the X_0 draw (scaled by zero variance)
    for (int i = 0; i < 3; ++i)
        CHECK(traj.states[i] == params.noise.sample(rng));
}

TEST_CASE("same seed reproduces the identical trajectory") {
    const SystemParams params = gaussian_system(0.8, 1.3, 0.0, true);
    const Trajectory first = simulate(params, NoControl{}, 50, 123);
    const Trajectory second = simulate(params, NoControl{}, 50, 123);
    CHECK(first == second);
    const Trajectory other = simulate(params, NoControl{}, 50, 124);
    CHECK(first.states != other.states);
}

TEST_CASE("state covariance closed form") {
    SUBCASE("iid case is the identity") {
        const CovMatrix cov = state_covariance(gaussian_system(0.0, 1.0, 1.0), 3);
        CHECK(max_abs_diff(cov, Matrix::identity(3)) < 1e-15);
    }
    SUBCASE("stationary initialization gives the Toeplitz form") {
        const SystemParams params = gaussian_system(0.5, 1.0, 0.0, true);
        const CovMatrix cov = state_covariance(params, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(cov(i, j) ==
                      doctest::Approx((4.0 / 3.0) * std::pow(0.5, std::abs(i - j)))
                          .epsilon(1e-12));
    }
    SUBCASE("unstable gain matches the dense product assembly") {
        const CovMatrix cov = state_covariance(gaussian_system(1.5, 1.0, 0.2), 6);
        const Matrix dense = oracle::dense_state_covariance(1.5, 1.0, 0.2, 6);
        CHECK(max_abs_diff(cov, dense) < 1e-9);
    }
    SUBCASE("|a| = 1 is rejected") {
        CHECK_THROWS_AS(state_covariance(gaussian_system(1.0, 1.0, 0.0), 3),
                        std::invalid_argument);
        CHECK_THROWS_AS(state_covariance(gaussian_system(-1.0, 1.0, 0.0), 3),
                        std::invalid_argument);
    }
}

TEST_CASE("stationary covariance examples") {
    SUBCASE("iid scaling") {
        Matrix expect = Matrix::identity(2);
        expect(0, 0) = expect(1, 1) = 4.0;
        CHECK(max_abs_diff(stationary_covariance(0.0, 2.0, 2), expect) < 1e-15);
    }
    SUBCASE("scalar case") {
        const CovMatrix cov = stationary_covariance(0.9, 1.0, 1);
        CHECK(cov(0, 0) == doctest::Approx(1.0 / 0.19).epsilon(1e-12));
    }
    SUBCASE("negative gain alternates sign and equals the general form") {
        const CovMatrix stat = stationary_covariance(-0.5, 1.0, 3);
        const SystemParams params = gaussian_system(-0.5, 1.0, 0.0, true);
        CHECK(max_abs_diff(stat, state_covariance(params, 3)) < 1e-12);
        CHECK(stat(0, 1) < 0.0);
        CHECK(stat(0, 2) > 0.0);
    }
    SUBCASE("rejects |a| >= 1") {
        CHECK_THROWS_AS(stationary_covariance(1.0, 1.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(stationary_covariance(-1.3, 1.0, 3), std::invalid_argument);
    }
}

TEST_CASE("reset covariance block structure") {
    SUBCASE("off-blocks are exactly zero") {
        const CovMatrix cov = reset_covariance(0.5, 1.0, 4, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 2; j < 4; ++j) {
                CHECK(cov(i, j) == 0.0);
                CHECK(cov(j, i) == 0.0);
            }
        const CovMatrix stat = stationary_covariance(0.5, 1.0, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(cov(i, j) == stat(i, j));
                CHECK(cov(2 + i, 2 + j) == stat(i, j));
            }
    }
    SUBCASE("memoryless reset is invisible") {
        CHECK(max_abs_diff(reset_covariance(0.0, 1.5, 5, 2),
                           stationary_covariance(0.0, 1.5, 5)) < 1e-15);
    }
    SUBCASE("positive definite") {
        CHECK_NOTHROW(Cholesky{reset_covariance(0.7, 1.0, 6, 3)});
    }
    SUBCASE("tau bounds") {
        CHECK_THROWS_AS(reset_covariance(0.5, 1.0, 4, 0), std::invalid_argument);
        CHECK_THROWS_AS(reset_covariance(0.5, 1.0, 4, 4), std::invalid_argument);
    }
}

TEST_CASE("every covariance is positive definite on random directions") {
    CounterRng rng(31);
    std::vector<CovMatrix> mats;
    mats.push_back(state_covariance(gaussian_system(0.9, 1.0, 0.5), 8));
    mats.push_back(state_covariance(gaussian_system(-1.2, 1.0, 0.1), 8));
    mats.push_back(stationary_covariance(0.95, 2.0, 8));
    mats.push_back(reset_covariance(0.6, 1.0, 8, 3));
    for (const auto &cov : mats) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> y(cov.rows());
            for (auto &v : y)
                v = rng.next_standard_normal();
            double quad = 0.0;
            for (int i = 0; i < cov.rows(); ++i)
                for (int j = 0; j < cov.cols(); ++j)
                    quad += y[i] * cov(i, j) * y[j];
            CHECK(quad > 0.0);
        }
    }
}

TEST_CASE("empirical covariance of a million runs matches the closed form") {
    struct Config {
        double a;
        double init_var;
        bool stationary;
    };
    const Config configs[] = {{0.5, 0.0, true}, {1.2, 0.5, false}, {-0.8, 0.0, false}};
    const int n = 4;
    const long trials = 1000000;

    for (const auto &c : configs) {
        const SystemParams params = gaussian_system(c.a, 1.0, c.init_var, c.stationary);
        const CovMatrix expect = state_covariance(params, n);

        Matrix sum(n, n);
        const std::uint64_t base = derive_stream(555, static_cast<std::uint64_t>(c.a * 100));
        for (long trial = 0; trial < trials; ++trial) {
            const Trajectory traj =
                simulate(params, NoControl{}, n, derive_stream(base, trial));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j)
                    sum(i, j) += traj.states[i] * traj.states[j];
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double est = sum(i, j) / static_cast<double>(trials);
                const double se = std::sqrt((expect(i, i) * expect(j, j) +
                                             expect(i, j) * expect(i, j)) /
                                            static_cast<double>(trials));
                CHECK(std::abs(est - expect(i, j)) < 5.0 * se);
            }
        }
    }
}

TEST_CASE("simulation guards") {
    SUBCASE("stationary_init with |a| >= 1 is rejected") {
        CHECK_THROWS_AS(simulate(gaussian_system(1.2, 1.0, 0.0, true), NoControl{}, 5, 1),
                        std::invalid_argument);
    }
    SUBCASE("unstable runs past the horizon cap are rejected") {
        CHECK_THROWS_AS(simulate(gaussian_system(1.5, 1.0, 0.0), NoControl{}, 201, 1),
                        std::invalid_argument);
        SimOptions opts;
        opts.unstable_horizon_cap = 250;
        opts.overflow_limit = 1e308;
        CHECK_NOTHROW(simulate(gaussian_system(1.5, 1.0, 0.0), NoControl{}, 201, 1, opts));
    }
    SUBCASE("overflow reports an error") {
        SimOptions opts;
        opts.overflow_limit = 10.0;
        CHECK_THROWS_AS(simulate(gaussian_system(1.5, 1.0, 1.0), NoControl{}, 100, 3, opts),
                        std::overflow_error);
    }
}

TEST_CASE("trajectory serialization round trips") {
    const SystemParams params = gaussian_system(0.6, 1.0, 0.0, true);
    const Trajectory traj = simulate(params, Threshold{1.5}, 40, 77);

    SUBCASE("json preserves every field exactly") {
        const Trajectory back = trajectory_from_json(trajectory_to_json(traj));
        CHECK(back == traj);
    }
    SUBCASE("csv carries the state and control columns") {
        const std::string csv = trajectory_to_csv(traj);
        CHECK(csv.rfind("n,x,u\n", 0) == 0);
        const Trajectory back = trajectory_from_csv(csv);
        REQUIRE(back.states.size() == traj.states.size());
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            CHECK(back.states[i] == doctest::Approx(traj.states[i]).epsilon(1e-11));
            CHECK(back.controls[i] == doctest::Approx(traj.controls[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("covariance CSV is row-major without a header") {
    const CovMatrix cov = stationary_covariance(0.5, 1.0, 2);
    const std::string csv = matrix_to_csv(cov);
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        double a = 0.0, b = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2);
        CHECK(a == doctest::Approx(cov(rows, 0)).epsilon(1e-11));
        CHECK(b == doctest::Approx(cov(rows, 1)).epsilon(1e-11));
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("truncated gaussian moments agree with sampling") {
    const NoiseModel noise = NoiseModel::truncated_gaussian(1.0, 1.5);
    CounterRng rng(404);
    const int n = 400000;
    double sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = noise.sample(rng);
        CHECK(std::abs(z) <= 1.5);
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    const double var = noise.variance();
    const double m4 = noise.fourth_moment();
    CHECK(var < 1.0); // truncation shrinks the variance
    CHECK(std::abs(sum2 / n - var) < 5.0 * std::sqrt((m4 - var * var) / n));
    const double m8_proxy = noise.bound_b() * noise.bound_b() * noise.bound_b() *
                            noise.bound_b() * m4; // crude eighth-moment cap
    CHECK(std::abs(sum4 / n - m4) < 5.0 * std::sqrt(m8_proxy / n));
}

TEST_CASE("uniform noise moments are exact") {
    const NoiseModel noise = NoiseModel::uniform(1.0);
    CHECK(noise.variance() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(noise.fourth_moment() == doctest::Approx(0.2).epsilon(1e-15));
    CounterRng rng(9);
    for (int i = 0; i < 1000; ++i)
        CHECK(std::abs(noise.sample(rng)) <= 1.0);
}

TEST_SUITE_END();
