// JSON bindings for every configurable type. Parsing is strict: unknown
// keys are rejected, and invalid parameter combinations fail here with the
// violated inequality named.
#pragma once

#include <json.hpp>

#include "covertctl/analysis.hpp"
#include "covertctl/montecarlo.hpp"

namespace covertctl {

using Json = nlohmann::json;

Json noise_to_json(const NoiseModel &noise);
NoiseModel noise_from_json(const Json &j);

Json system_to_json(const SystemParams &params);
SystemParams system_from_json(const Json &j);

Json controller_to_json(const ControllerSpec &spec);
ControllerSpec controller_from_json(const Json &j);

/// Covariances accept an explicit 2-D array or a generator form:
/// {"stationary": {"a","sigma_z","n"}} or {"reset": {"a","sigma_z","n","tau"}}.
Matrix matrix_from_json(const Json &j);
Json matrix_to_json(const Matrix &m);

Json detector_to_json(const DetectorSpec &spec);
DetectorSpec detector_from_json(const Json &j);

Json trajectory_to_json(const Trajectory &traj);
Trajectory trajectory_from_json(const Json &j);

Json decision_to_json(const Decision &decision);

Json error_rates_to_json(const ErrorRates &rates);

Json bound_report_to_json(const BoundReport &report);
BoundReport bound_report_from_json(const Json &j);
std::string bound_report_to_csv(const BoundReport &report);

/// Full experiment file: system/controller/detector/trials/horizon_n/
/// master_seed plus optional moment_bound_c, gamma, sim_options and a
/// "bound" block to verify against.
struct ExperimentFile {
    ExperimentConfig config;
    std::optional<BoundReport> bound;
};
ExperimentFile experiment_from_json(const Json &j);
Json experiment_to_json(const ExperimentFile &file);

/// Simulation run file: {"system", "controller", "n", "seed"[, "sim_options"]}.
struct SimulateFile {
    SystemParams system;
    ControllerSpec controller;
    int n = 0;
    std::uint64_t seed = 0;
    SimOptions options;
};
SimulateFile simulate_file_from_json(const Json &j);

/// Detection run file: {"system", "detector"}.
struct DetectFile {
    SystemParams system;
    DetectorSpec detector;
};
DetectFile detect_file_from_json(const Json &j);

} // namespace covertctl
