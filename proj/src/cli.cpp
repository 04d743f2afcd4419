#include "covertctl/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "covertctl/config.hpp"
#include "covertctl/io.hpp"
#include "covertctl/oracles.hpp"

namespace covertctl::cli {

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
    return buf;
}

Json load_json(const std::string &path) { return Json::parse(read_text(path)); }

std::string replace_extension(const std::string &path, const char *ext) {
    return std::filesystem::path(path).replace_extension(ext).string();
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
    std::string which;
    std::optional<double> a, epsilon, delta, e_u, c, gamma, sigma_z, bound_b;
    std::string noise_kind = "uniform";
    std::string out_path;
};

double required(const std::optional<double> &v, const char *flag) {
    if (!v)
        throw std::invalid_argument(std::string("bounds: missing --") + flag);
    return *v;
}

int run_bounds(const BoundsArgs &args, std::ostream &out) {
    BoundReport report;
    std::ostringstream extra;

    if (args.which == "covert_gain") {
        const double a = required(args.a, "a");
        const double eps = required(args.epsilon, "epsilon");
        report = {"covert_gain_bound", covert_gain_bound(a, eps),
                  {{"a", a}, {"epsilon", eps}}, BoundReport::Direction::Upper};
    } else if (args.which == "reset_covert") {
        const double eps = required(args.epsilon, "epsilon");
        report = {"reset_covert_bound", reset_covert_bound(eps),
                  {{"epsilon", eps}}, BoundReport::Direction::Upper};
    } else if (args.which == "reset_detect") {
        const double delta = required(args.delta, "delta");
        report = {"reset_detect_gain_bound", reset_detect_gain_bound(delta),
                  {{"delta", delta}}, BoundReport::Direction::Lower};
    } else if (args.which == "k0") {
        const double delta = required(args.delta, "delta");
        NoiseModel noise = NoiseModel::uniform(1.0);
        if (args.noise_kind == "uniform")
            noise = NoiseModel::uniform(required(args.bound_b, "bound-b"));
        else if (args.noise_kind == "gaussian")
            noise = NoiseModel::gaussian(required(args.sigma_z, "sigma-z"));
        else if (args.noise_kind == "truncated_gaussian")
            noise = NoiseModel::truncated_gaussian(required(args.sigma_z, "sigma-z"),
                                                   required(args.bound_b, "bound-b"));
        else
            throw std::invalid_argument("bounds: unknown --noise-kind '" +
                                        args.noise_kind + "'");
        double e_u;
        if (args.e_u) {
            e_u = *args.e_u;
        } else {
            // steady-state one-bit energy (aB/(2-a))^2 from --a and the bound
            const double a = required(args.a, "a");
            const double bb = required(args.bound_b, "bound-b");
            e_u = (a * bb / (2.0 - a)) * (a * bb / (2.0 - a));
        }
        const auto design = innovation_energy_design(delta, noise, e_u);
        report = {"innovation_energy_k0", static_cast<double>(design.k0),
                  {{"delta", delta}, {"e_u", e_u}}, BoundReport::Direction::Lower};
        extra << "t " << format_double(design.t) << '\n';
    } else if (args.which == "n0") {
        const double c = required(args.c, "c");
        const double gamma = required(args.gamma, "gamma");
        const double delta = required(args.delta, "delta");
        const double a = required(args.a, "a");
        const double sigma_z = required(args.sigma_z, "sigma-z");
        const auto design = magnitude_design(c, gamma, delta, a, sigma_z);
        report = {"magnitude_n0", static_cast<double>(design.n0),
                  {{"c", c}, {"gamma", gamma}, {"delta", delta}, {"a", a},
                   {"sigma_z", sigma_z}},
                  BoundReport::Direction::Lower};
        extra << "m " << format_double(design.m) << '\n';
    } else {
        throw std::invalid_argument("bounds: unknown --which '" + args.which + "'");
    }

    out << format_double(report.value) << '\n' << extra.str();
    if (!args.out_path.empty()) {
        if (args.out_path.ends_with(".csv"))
            write_text_atomic(args.out_path, bound_report_to_csv(report));
        else
            write_text_atomic(args.out_path, bound_report_to_json(report).dump(2) + "\n");
    }
    return 0;
}

// ---- experiment / sweep ---------------------------------------------------

std::string rates_row(const std::string &param, const std::string &value,
                      const ErrorRates &rates, const std::string &verdict) {
    std::ostringstream row;
    row << param << ',' << value << ',' << format_double(rates.alpha_hat) << ','
        << format_double(rates.beta_hat) << ',' << format_double(rates.alpha_ci) << ','
        << format_double(rates.beta_ci) << ',' << rates.trials << ',' << verdict << '\n';
    return row.str();
}

void append_results_csv(const std::string &path, const std::string &rows) {
    static const char *header = "param,value,alpha,beta,alpha_ci,beta_ci,trials,verdict\n";
    std::string content;
    if (std::filesystem::exists(path)) {
        content = read_text(path);
        if (content.rfind(header, 0) != 0)
            content = header + content;
    } else {
        content = header;
    }
    content += rows;
    write_text_atomic(path, content);
}

Json rates_json(const std::string &param, const Json &value, const ErrorRates &rates,
                const std::string &verdict) {
    Json j = error_rates_to_json(rates);
    j["param"] = param;
    j["value"] = value;
    j["verdict"] = verdict;
    return j;
}

void write_results(const std::string &out_path, const std::string &csv_rows,
                   const Json &json_rows, const Json &config_echo) {
    append_results_csv(out_path, csv_rows);
    const Json mirror{{"timestamp", iso_timestamp()},
                      {"config", config_echo},
                      {"results", json_rows}};
    write_text_atomic(replace_extension(out_path, ".json"), mirror.dump(2) + "\n");
}

int run_experiment(const std::string &config_path, const std::string &out_path,
                   std::ostream &out) {
    const ExperimentFile file = experiment_from_json(load_json(config_path));
    const ErrorRates rates = estimate_error_rates(file.config);
    std::string verdict;
    if (file.bound)
        verdict = to_string(verify_bound(rates, *file.bound));

    out << "alpha " << format_double(rates.alpha_hat) << " +/- "
        << format_double(rates.alpha_ci) << '\n'
        << "beta " << format_double(rates.beta_hat) << " +/- "
        << format_double(rates.beta_ci) << '\n';
    if (!verdict.empty())
        out << "verdict " << verdict << '\n';

    write_results(out_path, rates_row("", "", rates, verdict),
                  Json::array({rates_json("", nullptr, rates, verdict)}),
                  experiment_to_json(file));
    return 0;
}

int run_sweep(const std::string &config_path, const std::string &param,
              const std::vector<double> &values, const std::string &out_path,
              std::ostream &out) {
    const ExperimentFile file = experiment_from_json(load_json(config_path));
    const auto results = sweep(file.config, param, values);

    std::string csv_rows;
    Json json_rows = Json::array();
    for (const auto &[value, rates] : results) {
        std::string verdict;
        if (file.bound)
            verdict = to_string(verify_bound(rates, *file.bound));
        csv_rows += rates_row(param, format_double(value), rates, verdict);
        json_rows.push_back(rates_json(param, value, rates, verdict));
        out << param << " = " << format_double(value) << ": alpha "
            << format_double(rates.alpha_hat) << ", beta "
            << format_double(rates.beta_hat)
            << (verdict.empty() ? "" : ", " + verdict) << '\n';
    }
    write_results(out_path, csv_rows, json_rows, experiment_to_json(file));
    return 0;
}

// ---- simulate / detect ----------------------------------------------------

int run_simulate(const std::string &config_path, const std::string &out_path,
                 const std::string &format, std::ostream &out) {
    const SimulateFile file = simulate_file_from_json(load_json(config_path));
    const Trajectory traj =
        simulate(file.system, file.controller, file.n, file.seed, file.options);

    if (format == "json" || (format == "auto" && out_path.ends_with(".json"))) {
        write_text_atomic(out_path, trajectory_to_json(traj).dump(2) + "\n");
    } else {
        write_text_atomic(out_path, trajectory_to_csv(traj));
        const Json meta{{"timestamp", iso_timestamp()},
                        {"system", system_to_json(file.system)},
                        {"controller", controller_to_json(file.controller)},
                        {"n", file.n},
                        {"seed", file.seed},
                        {"initial_state", traj.initial_state},
                        {"crossing_times", traj.crossing_times}};
        write_text_atomic(out_path + ".meta.json", meta.dump(2) + "\n");
    }
    out << "wrote " << traj.states.size() << " states to " << out_path << '\n';
    return 0;
}

int run_detect(const std::string &config_path, const std::string &trajectory_path,
               std::ostream &out) {
    const DetectFile file = detect_file_from_json(load_json(config_path));
    Trajectory traj;
    if (trajectory_path.ends_with(".json"))
        traj = trajectory_from_json(load_json(trajectory_path));
    else
        traj = trajectory_from_csv(read_text(trajectory_path));

    const Decision decision = detector_decide(file.detector, traj.states,
                                              file.system.gain_a,
                                              file.system.noise.std_dev());
    out << decision_to_json(decision).dump(2) << '\n';
    return 0;
}

// ---- verify ---------------------------------------------------------------

int run_verify(const std::string &oracle, const std::string &grid_path,
               std::ostream &out) {
    oracle::VerifyGrid grid = oracle::default_grid();
    if (grid_path != "default") {
        const Json j = load_json(grid_path);
        if (j.contains("a"))
            grid.gains_a = j.at("a").get<std::vector<double>>();
        if (j.contains("b"))
            grid.gains_b = j.at("b").get<std::vector<double>>();
        if (j.contains("n"))
            grid.sizes = j.at("n").get<std::vector<int>>();
        if (j.contains("sigma_z"))
            grid.sigmas = j.at("sigma_z").get<std::vector<double>>();
    }

    double worst = 0.0;
    double tolerance = 1e-9;
    if (oracle == "covariance") {
        worst = oracle::verify_covariance(grid);
    } else if (oracle == "trace") {
        worst = oracle::verify_trace(grid);
    } else if (oracle == "logdet") {
        worst = oracle::verify_logdet(grid);
    } else if (oracle == "inverse") {
        worst = oracle::verify_inverse(grid);
        tolerance = 1e-10;
    } else if (oracle == "kl") {
        worst = oracle::verify_kl(grid);
    } else {
        throw std::invalid_argument("verify: unknown --oracle '" + oracle + "'");
    }

    out << "max abs error " << format_double(worst) << " (tolerance "
        << format_double(tolerance) << ")\n";
    return worst < tolerance ? 0 : 1;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"covertctl: covert-control laboratory for AR(1) systems"};
    app.require_subcommand(1);

    // simulate
    auto *sim_cmd = app.add_subcommand("simulate", "Simulate a trajectory from a JSON config");
    std::string sim_config, sim_out, sim_format = "auto";
    sim_cmd->add_option("--config", sim_config, "JSON config: system, controller, n, seed")
        ->required();
    sim_cmd->add_option("--out", sim_out, "Output path (CSV by default)")->required();
    sim_cmd->add_option("--format", sim_format, "csv, json, or auto (by extension)")
        ->check(CLI::IsMember({"csv", "json", "auto"}));

    // bounds
    auto *bounds_cmd = app.add_subcommand("bounds", "Evaluate a closed-form bound");
    BoundsArgs bounds_args;
    bounds_cmd
        ->add_option("--which", bounds_args.which,
                     "covert_gain | reset_covert | reset_detect | k0 | n0")
        ->required();
    bounds_cmd->add_option("--a", bounds_args.a, "system gain a");
    bounds_cmd->add_option("--epsilon", bounds_args.epsilon, "covertness level");
    bounds_cmd->add_option("--delta", bounds_args.delta, "detection level");
    bounds_cmd->add_option("--e-u", bounds_args.e_u, "average control energy");
    bounds_cmd->add_option("--c", bounds_args.c, "moment budget c");
    bounds_cmd->add_option("--gamma", bounds_args.gamma, "moment order gamma");
    bounds_cmd->add_option("--sigma-z", bounds_args.sigma_z, "noise std-dev");
    bounds_cmd->add_option("--bound-b", bounds_args.bound_b, "noise support bound B");
    bounds_cmd->add_option("--noise-kind", bounds_args.noise_kind,
                           "uniform | gaussian | truncated_gaussian (k0 only)");
    bounds_cmd->add_option("--out", bounds_args.out_path,
                           "write the bound report (.json or .csv)");

    // detect
    auto *detect_cmd = app.add_subcommand("detect", "Run a detector over a stored trajectory");
    std::string detect_config, detect_traj;
    detect_cmd->add_option("--config", detect_config, "JSON config: system, detector")
        ->required();
    detect_cmd->add_option("--trajectory", detect_traj, "trajectory file (.csv or .json)")
        ->required();

    // experiment
    auto *exp_cmd = app.add_subcommand("experiment", "Estimate (alpha, beta) by Monte Carlo");
    std::string exp_config, exp_out;
    exp_cmd->add_option("--config", exp_config, "experiment JSON config")->required();
    exp_cmd->add_option("--out", exp_out, "CSV results path (JSON mirror alongside)")
        ->required();

    // sweep
    auto *sweep_cmd = app.add_subcommand("sweep", "Run an experiment over a parameter grid");
    std::string sweep_config, sweep_param, sweep_out;
    std::vector<double> sweep_values;
    sweep_cmd->add_option("--config", sweep_config, "experiment JSON config")->required();
    sweep_cmd->add_option("--param", sweep_param,
                          "config field to vary, e.g. controller.b or detector.t")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "values to sweep over")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "CSV results path")->required();

    // verify
    auto *verify_cmd =
        app.add_subcommand("verify", "Cross-check closed forms against dense oracles");
    std::string verify_oracle, verify_grid = "default";
    verify_cmd
        ->add_option("--oracle", verify_oracle,
                     "covariance | trace | logdet | inverse | kl")
        ->required();
    verify_cmd->add_option("--grid", verify_grid, "grid JSON path or 'default'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        // prints contextual help for --help, the failure otherwise
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim_cmd->parsed())
            return run_simulate(sim_config, sim_out, sim_format, out);
        if (bounds_cmd->parsed())
            return run_bounds(bounds_args, out);
        if (detect_cmd->parsed())
            return run_detect(detect_config, detect_traj, out);
        if (exp_cmd->parsed())
            return run_experiment(exp_config, exp_out, out);
        if (sweep_cmd->parsed())
            return run_sweep(sweep_config, sweep_param, sweep_values, sweep_out, out);
        if (verify_cmd->parsed())
            return run_verify(verify_oracle, verify_grid, out);
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const Json::parse_error &e) {
        err << "I/O error: invalid JSON: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace covertctl::cli
