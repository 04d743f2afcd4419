#include "covertctl/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "covertctl/normal.hpp"

namespace covertctl {

namespace {

void require_stable(double g, const char *what) {
    if (!(std::abs(g) < 1.0))
        throw std::invalid_argument(std::string(what) + ": requires |gain| < 1");
}

} // namespace

double gaussian_kl(std::span<const double> mu0, const CovMatrix &cov0,
                   std::span<const double> mu1, const CovMatrix &cov1) {
    const int n = cov0.rows();
    if (cov1.rows() != n || cov0.cols() != n || cov1.cols() != n)
        throw std::invalid_argument("gaussian_kl: dimension mismatch");
    if (static_cast<int>(mu0.size()) != n || static_cast<int>(mu1.size()) != n)
        throw std::invalid_argument("gaussian_kl: mean dimension mismatch");

    const Cholesky chol0(cov0);
    const Cholesky chol1(cov1);

    const double trace = chol1.trace_inverse_product(cov0);
    std::vector<double> dmu(n);
    for (int i = 0; i < n; ++i)
        dmu[i] = mu1[i] - mu0[i];
    const double mahal = chol1.inverse_quad_form(dmu);
    const double log_det_ratio = chol1.log_det() - chol0.log_det();

    double kl = 0.5 * (trace + mahal - n + log_det_ratio);
    if (kl < 0.0 && kl > -1e-10)
        kl = 0.0; // cancellation noise; KL is nonnegative
    return kl;
}

double error_sum_lower_bound(double kl) {
    if (kl < 0.0)
        throw std::invalid_argument("error_sum_lower_bound: kl must be >= 0");
    return std::max(0.0, 1.0 - std::sqrt(0.5 * kl));
}

double trace_ratio_ss(double a, double b, int n) {
    require_stable(a, "trace_ratio_ss");
    require_stable(b, "trace_ratio_ss");
    if (n < 1)
        throw std::invalid_argument("trace_ratio_ss: n must be >= 1");
    return ((n - 2) * b * b - 2.0 * (n - 1) * a * b + n) / (1.0 - a * a);
}

CovMatrix stationary_inverse(double a, double sigma_z, int n) {
    require_stable(a, "stationary_inverse");
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("stationary_inverse: sigma_z must be > 0");
    if (n < 1)
        throw std::invalid_argument("stationary_inverse: n must be >= 1");
    const double inv_var = 1.0 / (sigma_z * sigma_z);

    CovMatrix inv(n, n);
    if (n == 1) { // the tridiagonal form below assumes n >= 2
        inv(0, 0) = (1.0 - a * a) * inv_var;
        return inv;
    }
    for (int i = 0; i < n; ++i) {
        const bool interior = i >= 1 && i <= n - 2;
        inv(i, i) = (1.0 + (interior ? a * a : 0.0)) * inv_var;
        if (i + 1 < n) {
            inv(i, i + 1) = -a * inv_var;
            inv(i + 1, i) = -a * inv_var;
        }
    }
    return inv;
}

double stationary_logdet(double a, double sigma_z, int n) {
    require_stable(a, "stationary_logdet");
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("stationary_logdet: sigma_z must be > 0");
    if (n < 1)
        throw std::invalid_argument("stationary_logdet: n must be >= 1");
    const double one_minus = 1.0 - a * a;
    return n * std::log(sigma_z * sigma_z / one_minus) + (n - 1) * std::log(one_minus);
}

double reset_kl(double a) {
    require_stable(a, "reset_kl");
    return 0.5 * std::log(1.0 / (1.0 - a * a));
}

double mixture_kl_upper_bound(std::span<const double> kl_per_tau,
                              std::span<const double> p_tau) {
    if (kl_per_tau.size() != p_tau.size())
        throw std::invalid_argument("mixture_kl_upper_bound: vectors differ in length");
    if (kl_per_tau.empty())
        throw std::invalid_argument("mixture_kl_upper_bound: empty input");
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < p_tau.size(); ++i) {
        if (p_tau[i] < 0.0)
            throw std::invalid_argument("mixture_kl_upper_bound: negative probability");
        if (kl_per_tau[i] < 0.0)
            throw std::invalid_argument("mixture_kl_upper_bound: negative divergence");
        total += p_tau[i];
        weighted += p_tau[i] * kl_per_tau[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mixture_kl_upper_bound: p_tau must sum to 1");
    return weighted;
}

double covert_gain_bound(double a, double epsilon) {
    if (!(std::abs(a) > 0.0 && std::abs(a) < 1.0))
        throw std::invalid_argument("covert_gain_bound: requires 0 < |a| < 1");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("covert_gain_bound: epsilon must be > 0");
    return std::sqrt(1.0 - (1.0 - a * a) * std::exp(-4.0 * epsilon * epsilon));
}

double reset_covert_bound(double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("reset_covert_bound: epsilon must be > 0");
    return std::sqrt(1.0 - std::exp(-4.0 * epsilon * epsilon));
}

double reset_detect_gain_bound(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("reset_detect_gain_bound: delta must lie in (0,1)");
    const double q_alpha = q_inverse(delta / 4.0);
    const double q_beta = q_inverse((2.0 - delta) / 4.0);
    const double num = q_alpha * q_alpha - q_beta * q_beta;
    const double den = q_alpha * q_alpha + q_beta * q_beta;
    return std::sqrt(std::max(0.0, num) / den);
}

double gain_change_kl(double a, double b, int n) {
    const double trace = trace_ratio_ss(a, b, n);
    const double log_ratio = std::log((1.0 - a * a) / (1.0 - b * b));
    double kl = 0.5 * (trace - n + log_ratio);
    if (kl < 0.0 && kl > -1e-10)
        kl = 0.0;
    return kl;
}

} // namespace covertctl
