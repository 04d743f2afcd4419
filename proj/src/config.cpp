#include "covertctl/config.hpp"

#include <algorithm>
#include <sstream>

#include "covertctl/covariance.hpp"
#include "covertctl/io.hpp"

namespace covertctl {

namespace {

void require_keys(const Json &j, const char *what,
                  std::initializer_list<const char *> required,
                  std::initializer_list<const char *> optional = {}) {
    if (!j.is_object())
        throw std::invalid_argument(std::string(what) + ": expected a JSON object");
    for (const char *key : required)
        if (!j.contains(key))
            throw std::invalid_argument(std::string(what) + ": missing key '" + key + "'");
    for (const auto &item : j.items()) {
        const auto matches = [&](const char *key) { return item.key() == key; };
        if (!std::any_of(required.begin(), required.end(), matches) &&
            !std::any_of(optional.begin(), optional.end(), matches))
            throw std::invalid_argument(std::string(what) + ": unknown key '" +
                                        item.key() + "'");
    }
}

double get_number(const Json &j, const char *what, const char *key) {
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string(what) + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const Json &j, const char *what, const char *key) {
    if (!j.at(key).is_number_integer())
        throw std::invalid_argument(std::string(what) + ": '" + key +
                                    "' must be an integer");
    return j.at(key).get<int>();
}

} // namespace

Json noise_to_json(const NoiseModel &noise) {
    switch (noise.kind()) {
    case NoiseKind::Gaussian:
        return {{"kind", "gaussian"}, {"sigma_z", noise.sigma_z()}};
    case NoiseKind::Uniform:
        return {{"kind", "uniform"}, {"bound_b", noise.bound_b()}};
    case NoiseKind::TruncatedGaussian:
        return {{"kind", "truncated_gaussian"},
                {"sigma_z", noise.sigma_z()},
                {"bound_b", noise.bound_b()}};
    }
    return {};
}

NoiseModel noise_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("noise: expected an object with a 'kind' key");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") {
        require_keys(j, "noise(gaussian)", {"kind", "sigma_z"});
        return NoiseModel::gaussian(get_number(j, "noise", "sigma_z"));
    }
    if (kind == "uniform") {
        require_keys(j, "noise(uniform)", {"kind", "bound_b"});
        return NoiseModel::uniform(get_number(j, "noise", "bound_b"));
    }
    if (kind == "truncated_gaussian") {
        require_keys(j, "noise(truncated_gaussian)", {"kind", "sigma_z", "bound_b"});
        return NoiseModel::truncated_gaussian(get_number(j, "noise", "sigma_z"),
                                              get_number(j, "noise", "bound_b"));
    }
    throw std::invalid_argument("noise: unknown kind '" + kind + "'");
}

Json system_to_json(const SystemParams &params) {
    return {{"gain_a", params.gain_a},
            {"noise", noise_to_json(params.noise)},
            {"init_variance", params.init_variance},
            {"stationary_init", params.stationary_init}};
}

SystemParams system_from_json(const Json &j) {
    require_keys(j, "system", {"gain_a", "noise"}, {"init_variance", "stationary_init"});
    SystemParams params;
    params.gain_a = get_number(j, "system", "gain_a");
    params.noise = noise_from_json(j.at("noise"));
    if (j.contains("init_variance"))
        params.init_variance = get_number(j, "system", "init_variance");
    if (j.contains("stationary_init"))
        params.stationary_init = j.at("stationary_init").get<bool>();
    params.initial_variance(); // validates
    return params;
}

Json controller_to_json(const ControllerSpec &spec) {
    struct Visitor {
        Json operator()(const NoControl &) const { return {{"type", "none"}}; }
        Json operator()(const OneBit &c) const {
            return {{"type", "one_bit"}, {"c1", c.c1}, {"bound_b", c.bound_b}};
        }
        Json operator()(const Threshold &c) const {
            return {{"type", "threshold"}, {"d", c.d}};
        }
        Json operator()(const GainChange &c) const {
            return {{"type", "gain_change"}, {"b", c.b}};
        }
        Json operator()(const ResetOnce &c) const {
            return {{"type", "reset_once"}, {"tau", c.tau}};
        }
    };
    return std::visit(Visitor{}, spec);
}

ControllerSpec controller_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("controller: expected an object with a 'type' key");
    const std::string type = j.at("type").get<std::string>();
    if (type == "none") {
        require_keys(j, "controller(none)", {"type"});
        return NoControl{};
    }
    if (type == "one_bit") {
        require_keys(j, "controller(one_bit)", {"type", "c1", "bound_b"});
        return OneBit{get_number(j, "controller", "c1"),
                      get_number(j, "controller", "bound_b")};
    }
    if (type == "threshold") {
        require_keys(j, "controller(threshold)", {"type", "d"});
        return Threshold{get_number(j, "controller", "d")};
    }
    if (type == "gain_change") {
        require_keys(j, "controller(gain_change)", {"type", "b"});
        return GainChange{get_number(j, "controller", "b")};
    }
    if (type == "reset_once") {
        require_keys(j, "controller(reset_once)", {"type", "tau"});
        return ResetOnce{get_int(j, "controller", "tau")};
    }
    throw std::invalid_argument("controller: unknown type '" + type + "'");
}

Json matrix_to_json(const Matrix &m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j) {
    if (j.is_array()) {
        const int n = static_cast<int>(j.size());
        if (n == 0)
            throw std::invalid_argument("matrix: empty array");
        const int cols = static_cast<int>(j.at(0).size());
        Matrix m(n, cols);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(j.at(i).size()) != cols)
                throw std::invalid_argument("matrix: ragged rows");
            for (int c = 0; c < cols; ++c)
                m(i, c) = j.at(i).at(c).get<double>();
        }
        return m;
    }
    if (j.is_object() && j.contains("stationary")) {
        require_keys(j, "matrix", {"stationary"});
        const Json &s = j.at("stationary");
        require_keys(s, "matrix.stationary", {"a", "sigma_z", "n"});
        return stationary_covariance(get_number(s, "stationary", "a"),
                                     get_number(s, "stationary", "sigma_z"),
                                     get_int(s, "stationary", "n"));
    }
    if (j.is_object() && j.contains("reset")) {
        require_keys(j, "matrix", {"reset"});
        const Json &s = j.at("reset");
        require_keys(s, "matrix.reset", {"a", "sigma_z", "n", "tau"});
        return reset_covariance(get_number(s, "reset", "a"),
                                get_number(s, "reset", "sigma_z"),
                                get_int(s, "reset", "n"), get_int(s, "reset", "tau"));
    }
    throw std::invalid_argument(
        "matrix: expected a 2-D array or a {stationary|reset: ...} generator");
}

Json detector_to_json(const DetectorSpec &spec) {
    struct Visitor {
        Json operator()(const MagnitudeSpec &d) const {
            return {{"type", "magnitude"}, {"m", d.m}, {"n0", d.n0}};
        }
        Json operator()(const InnovationEnergySpec &d) const {
            return {{"type", "innovation_energy"}, {"k", d.k}, {"t", d.t}};
        }
        Json operator()(const ResetChiSquareSpec &d) const {
            return {{"type", "reset_chi_square"}, {"t", d.t}, {"tau", d.tau}};
        }
        Json operator()(const ResetQuadraticSpec &d) const {
            return {{"type", "reset_quadratic"}, {"t_prime", d.t_prime}, {"tau", d.tau}};
        }
        Json operator()(const GaussianLrt &d) const {
            return {{"type", "gaussian_lrt"},
                    {"cov0", matrix_to_json(d.cov0())},
                    {"cov1", matrix_to_json(d.cov1())},
                    {"log_threshold", d.log_threshold()}};
        }
    };
    return std::visit(Visitor{}, spec);
}

DetectorSpec detector_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("detector: expected an object with a 'type' key");
    const std::string type = j.at("type").get<std::string>();
    if (type == "magnitude") {
        require_keys(j, "detector(magnitude)", {"type", "m", "n0"});
        MagnitudeSpec d{get_number(j, "detector", "m"), get_int(j, "detector", "n0")};
        if (!(d.m > 0.0) || d.n0 < 1)
            throw std::invalid_argument("detector(magnitude): requires m > 0 and n0 >= 1");
        return d;
    }
    if (type == "innovation_energy") {
        require_keys(j, "detector(innovation_energy)", {"type", "k", "t"});
        InnovationEnergySpec d{get_int(j, "detector", "k"), get_number(j, "detector", "t")};
        if (d.k < 1)
            throw std::invalid_argument("detector(innovation_energy): requires k >= 1");
        return d;
    }
    if (type == "reset_chi_square") {
        require_keys(j, "detector(reset_chi_square)", {"type", "t", "tau"});
        ResetChiSquareSpec d{get_number(j, "detector", "t"), get_int(j, "detector", "tau")};
        if (!(d.t > 0.0))
            throw std::invalid_argument(
                "detector(reset_chi_square): requires t > 0 (compared as t^2)");
        if (d.tau < 1)
            throw std::invalid_argument("detector(reset_chi_square): requires tau >= 1");
        return d;
    }
    if (type == "reset_quadratic") {
        require_keys(j, "detector(reset_quadratic)", {"type", "t_prime", "tau"});
        ResetQuadraticSpec d{get_number(j, "detector", "t_prime"),
                             get_int(j, "detector", "tau")};
        if (d.tau < 1)
            throw std::invalid_argument("detector(reset_quadratic): requires tau >= 1");
        return d;
    }
    if (type == "gaussian_lrt") {
        require_keys(j, "detector(gaussian_lrt)", {"type", "cov0", "cov1", "log_threshold"});
        return GaussianLrt(matrix_from_json(j.at("cov0")), matrix_from_json(j.at("cov1")),
                           get_number(j, "detector", "log_threshold"));
    }
    throw std::invalid_argument("detector: unknown type '" + type + "'");
}

Json trajectory_to_json(const Trajectory &traj) {
    return {{"states", traj.states},
            {"controls", traj.controls},
            {"initial_state", traj.initial_state},
            {"seed", traj.seed},
            {"crossing_times", traj.crossing_times}};
}

Trajectory trajectory_from_json(const Json &j) {
    require_keys(j, "trajectory", {"states", "controls", "initial_state", "seed"},
                 {"crossing_times"});
    Trajectory traj;
    traj.states = j.at("states").get<std::vector<double>>();
    traj.controls = j.at("controls").get<std::vector<double>>();
    traj.initial_state = j.at("initial_state").get<double>();
    traj.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("crossing_times"))
        traj.crossing_times = j.at("crossing_times").get<std::vector<int>>();
    if (traj.states.size() != traj.controls.size())
        throw std::invalid_argument("trajectory: states and controls differ in length");
    return traj;
}

Json decision_to_json(const Decision &decision) {
    return {{"reject_null", decision.reject_null},
            {"statistic", decision.statistic},
            {"threshold", decision.threshold}};
}

Json error_rates_to_json(const ErrorRates &rates) {
    return {{"alpha_hat", rates.alpha_hat},
            {"beta_hat", rates.beta_hat},
            {"alpha_ci", rates.alpha_ci},
            {"beta_ci", rates.beta_ci},
            {"trials", rates.trials}};
}

Json bound_report_to_json(const BoundReport &report) {
    return {{"name", report.name},
            {"value", report.value},
            {"inputs", report.inputs},
            {"direction",
             report.direction == BoundReport::Direction::Upper ? "upper" : "lower"}};
}

BoundReport bound_report_from_json(const Json &j) {
    require_keys(j, "bound", {"name", "value", "direction"}, {"inputs"});
    BoundReport report;
    report.name = j.at("name").get<std::string>();
    report.value = get_number(j, "bound", "value");
    const std::string dir = j.at("direction").get<std::string>();
    if (dir == "upper")
        report.direction = BoundReport::Direction::Upper;
    else if (dir == "lower")
        report.direction = BoundReport::Direction::Lower;
    else
        throw std::invalid_argument("bound: direction must be 'upper' or 'lower'");
    if (j.contains("inputs"))
        report.inputs = j.at("inputs").get<std::map<std::string, double>>();
    return report;
}

std::string bound_report_to_csv(const BoundReport &report) {
    std::ostringstream out;
    out << report.name << ',' << format_double(report.value) << ','
        << (report.direction == BoundReport::Direction::Upper ? "upper" : "lower") << ',';
    bool first = true;
    for (const auto &[key, value] : report.inputs) {
        if (!first)
            out << ';';
        out << key << '=' << format_double(value);
        first = false;
    }
    out << '\n';
    return out.str();
}

ExperimentFile experiment_from_json(const Json &j) {
    require_keys(j, "experiment",
                 {"system", "controller", "detector", "trials", "horizon_n", "master_seed"},
                 {"moment_bound_c", "gamma", "sim_options", "bound"});
    ExperimentFile file;
    file.config.system = system_from_json(j.at("system"));
    file.config.controller = controller_from_json(j.at("controller"));
    file.config.detector = detector_from_json(j.at("detector"));
    file.config.trials = j.at("trials").get<long>();
    file.config.horizon_n = get_int(j, "experiment", "horizon_n");
    file.config.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("moment_bound_c")) {
        file.config.moment_bound_c = get_number(j, "experiment", "moment_bound_c");
        if (!(*file.config.moment_bound_c > 0.0))
            throw std::invalid_argument("experiment: moment_bound_c must be > 0");
    }
    if (j.contains("gamma")) {
        file.config.gamma = get_number(j, "experiment", "gamma");
        if (!(*file.config.gamma > 0.0))
            throw std::invalid_argument("experiment: gamma must be > 0");
    }
    if (j.contains("sim_options")) {
        const Json &s = j.at("sim_options");
        require_keys(s, "sim_options", {}, {"overflow_limit", "unstable_horizon_cap"});
        if (s.contains("overflow_limit"))
            file.config.sim_options.overflow_limit =
                get_number(s, "sim_options", "overflow_limit");
        if (s.contains("unstable_horizon_cap"))
            file.config.sim_options.unstable_horizon_cap =
                get_int(s, "sim_options", "unstable_horizon_cap");
    }
    if (j.contains("bound"))
        file.bound = bound_report_from_json(j.at("bound"));
    validate_config(file.config);
    return file;
}

Json experiment_to_json(const ExperimentFile &file) {
    Json j{{"system", system_to_json(file.config.system)},
           {"controller", controller_to_json(file.config.controller)},
           {"detector", detector_to_json(file.config.detector)},
           {"trials", file.config.trials},
           {"horizon_n", file.config.horizon_n},
           {"master_seed", file.config.master_seed}};
    if (file.config.moment_bound_c)
        j["moment_bound_c"] = *file.config.moment_bound_c;
    if (file.config.gamma)
        j["gamma"] = *file.config.gamma;
    if (file.bound)
        j["bound"] = bound_report_to_json(*file.bound);
    return j;
}

SimulateFile simulate_file_from_json(const Json &j) {
    require_keys(j, "simulate", {"system", "controller", "n", "seed"}, {"sim_options"});
    SimulateFile file;
    file.system = system_from_json(j.at("system"));
    file.controller = controller_from_json(j.at("controller"));
    file.n = get_int(j, "simulate", "n");
    file.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sim_options")) {
        const Json &s = j.at("sim_options");
        require_keys(s, "sim_options", {}, {"overflow_limit", "unstable_horizon_cap"});
        if (s.contains("overflow_limit"))
            file.options.overflow_limit = get_number(s, "sim_options", "overflow_limit");
        if (s.contains("unstable_horizon_cap"))
            file.options.unstable_horizon_cap =
                get_int(s, "sim_options", "unstable_horizon_cap");
    }
    validate_controller(file.controller, file.system);
    return file;
}

DetectFile detect_file_from_json(const Json &j) {
    require_keys(j, "detect", {"system", "detector"});
    DetectFile file;
    file.system = system_from_json(j.at("system"));
    file.detector = detector_from_json(j.at("detector"));
    return file;
}

} // namespace covertctl
