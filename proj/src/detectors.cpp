#include "covertctl/detectors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "covertctl/normal.hpp"

namespace covertctl {

Decision magnitude_decide(double x_n0, double m) {
    if (!(m > 0.0))
        throw std::invalid_argument("magnitude_decide: m must be > 0");
    const double mag = std::abs(x_n0);
    return {mag <= m, mag, m};
}

MagnitudeDesign magnitude_design(double c, double gamma, double delta, double a,
                                 double sigma_z) {
    if (!(std::abs(a) > 1.0))
        throw std::invalid_argument("magnitude_design: requires |a| > 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("magnitude_design: delta must lie in (0,1)");
    if (!(c > 0.0) || !(gamma > 0.0) || !(sigma_z > 0.0))
        throw std::invalid_argument("magnitude_design: c, gamma, sigma_z must be > 0");

    const double m = std::pow(2.0 * c / delta, 1.0 / gamma);
    const double q = q_inverse((1.0 - delta / 2.0) / 2.0);
    const double required = std::log(m * std::sqrt(a * a - 1.0) / (sigma_z * q)) /
                            std::log(std::abs(a));
    int n0 = std::max(1, static_cast<int>(std::ceil(required)));
    if (static_cast<double>(n0) < required) // guard the ceil against ties
        ++n0;
    return {m, n0};
}

Decision innovation_energy_decide(std::span<const double> states, double a,
                                  double sigma_z, double t) {
    if (states.size() < 2)
        throw std::invalid_argument("innovation_energy_decide: needs at least 2 states");
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("innovation_energy_decide: sigma_z must be > 0");
    const std::size_t k = states.size() - 1;
    double sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double y = states[i] - a * states[i - 1];
        sum += y * y;
    }
    const double statistic = sum / static_cast<double>(k);
    const double threshold = sigma_z * sigma_z + t;
    return {statistic >= threshold, statistic, threshold};
}

InnovationEnergyDesign innovation_energy_design(double delta, const NoiseModel &noise,
                                                double e_u) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("innovation_energy_design: delta must lie in (0,1)");
    if (!(e_u > 0.0))
        throw std::invalid_argument("innovation_energy_design: e_u must be > 0");
    const double var_z = noise.variance();
    if (!(var_z > 0.0))
        throw std::invalid_argument("innovation_energy_design: degenerate noise (variance 0)");
    const double m4 = noise.fourth_moment();
    const double spread = m4 - var_z * var_z; // Var[Z^2]
    const double half = delta / 2.0;

    const double root = std::sqrt((spread + 4.0 * e_u * var_z) / half) +
                        std::sqrt(spread / half);
    const double k_real = root * root / (e_u * e_u);
    const int k0 = std::max(1, static_cast<int>(std::ceil(k_real)));
    const double t = std::sqrt(spread / (static_cast<double>(k0) * half));
    return {k0, t};
}

Decision reset_chi_square_decide(double x_tau, double x_tau1, double a,
                                 double sigma_z, double t) {
    if (!(t > 0.0))
        throw std::invalid_argument("reset_chi_square_decide: t must be > 0");
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("reset_chi_square_decide: sigma_z must be > 0");
    const double innov = x_tau1 - a * x_tau;
    const double statistic = innov * innov / (sigma_z * sigma_z);
    const double threshold = t * t;
    return {statistic > threshold, statistic, threshold};
}

ChiSquareDesign reset_chi_square_design(double delta, double a) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("reset_chi_square_design: delta must lie in (0,1)");
    if (!(std::abs(a) < 1.0))
        throw std::invalid_argument("reset_chi_square_design: requires |a| < 1");
    const double lo = q_inverse(delta / 4.0);
    const double hi = std::sqrt((1.0 + a * a) / (1.0 - a * a)) *
                      q_inverse((2.0 - delta) / 4.0);
    return {0.5 * (lo + hi), lo <= hi};
}

double reset_quadratic_statistic(std::span<const double> states, double a,
                                 double sigma_z, int tau) {
    if (tau < 1 || tau >= static_cast<int>(states.size()))
        throw std::out_of_range("reset_quadratic_statistic: tau must lie in [1, n-1]");
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("reset_quadratic_statistic: sigma_z must be > 0");
    const double x_tau = states[tau - 1];
    const double x_tau1 = states[tau];
    const double innov = x_tau1 - a * x_tau;
    return (innov * innov - (1.0 - a * a) * x_tau1 * x_tau1) / (sigma_z * sigma_z);
}

GaussianLrt::GaussianLrt(Matrix cov0, Matrix cov1, double log_threshold)
    : log_threshold_(log_threshold) {
    if (cov0.rows() != cov0.cols() || cov1.rows() != cov1.cols() ||
        cov0.rows() != cov1.rows())
        throw std::invalid_argument("GaussianLrt: covariances must be square and equal-sized");
    Cholesky chol0(cov0); // throws std::domain_error when not PD
    Cholesky chol1(cov1);
    const double ratio = chol0.log_det() - chol1.log_det();
    core_ = std::make_shared<const Core>(Core{std::move(cov0), std::move(cov1),
                                              std::move(chol0), std::move(chol1), ratio});
}

Decision GaussianLrt::decide(std::span<const double> states) const {
    if (static_cast<int>(states.size()) != dim())
        throw std::invalid_argument("GaussianLrt: state vector has dimension " +
                                    std::to_string(states.size()) + ", expected " +
                                    std::to_string(dim()));
    const double statistic = core_->chol0.inverse_quad_form(states) -
                             core_->chol1.inverse_quad_form(states) +
                             core_->log_det_ratio;
    return {statistic > log_threshold_, statistic, log_threshold_};
}

int detector_min_horizon(const DetectorSpec &spec) {
    struct Visitor {
        int operator()(const MagnitudeSpec &d) const { return d.n0; }
        int operator()(const InnovationEnergySpec &d) const { return d.k + 1; }
        int operator()(const ResetChiSquareSpec &d) const { return d.tau + 1; }
        int operator()(const ResetQuadraticSpec &d) const { return d.tau + 1; }
        int operator()(const GaussianLrt &d) const { return d.dim(); }
    };
    return std::visit(Visitor{}, spec);
}

Decision detector_decide(const DetectorSpec &spec, std::span<const double> states,
                         double a, double sigma_z) {
    if (static_cast<int>(states.size()) < detector_min_horizon(spec))
        throw std::invalid_argument("detector_decide: trajectory shorter than the "
                                    "detector's minimum horizon");
    struct Visitor {
        std::span<const double> states;
        double a, sigma_z;

        Decision operator()(const MagnitudeSpec &d) const {
            return magnitude_decide(states[d.n0 - 1], d.m);
        }
        Decision operator()(const InnovationEnergySpec &d) const {
            return innovation_energy_decide(states.subspan(0, d.k + 1), a, sigma_z, d.t);
        }
        Decision operator()(const ResetChiSquareSpec &d) const {
            return reset_chi_square_decide(states[d.tau - 1], states[d.tau], a, sigma_z,
                                           d.t);
        }
        Decision operator()(const ResetQuadraticSpec &d) const {
            const double stat = reset_quadratic_statistic(states, a, sigma_z, d.tau);
            return {stat > d.t_prime, stat, d.t_prime};
        }
        Decision operator()(const GaussianLrt &d) const {
            return d.decide(states.subspan(0, d.dim()));
        }
    };
    return std::visit(Visitor{states, a, sigma_z}, spec);
}

} // namespace covertctl
