// Willie's decision rules.
//
//   magnitude:         declare "controlled" iff |X_{n0}| <= M
//   innovation energy: E_W = mean (X_n - a X_{n-1})^2, reject H0 iff
//                      E_W >= sigma_Z^2 + t
//   reset chi-square:  (x_{tau+1} - a x_tau)^2 / sigma_Z^2 > t^2
//   reset quadratic:   [(x_{tau+1} - a x_tau)^2 - (1-a^2) x_{tau+1}^2] / sigma_Z^2
//   Gaussian LRT:      x' S0^{-1} x - x' S1^{-1} x + log(|S0|/|S1|) > threshold
//
// H0 is always "uncontrolled"; reject_null means "declare controlled".
#pragma once

#include <memory>
#include <span>
#include <variant>

#include "covertctl/linalg.hpp"
#include "covertctl/noise.hpp"

namespace covertctl {

struct Decision {
    bool reject_null = false; ///< true: declare the system controlled
    double statistic = 0.0;
    double threshold = 0.0;
};

/// Declare "controlled" iff |x_n0| <= m (an unstable uncontrolled state is
/// unlikely to still be small at time n0).
Decision magnitude_decide(double x_n0, double m);

struct MagnitudeDesign {
    double m;
    int n0;
};

/// Sizes the magnitude test for an unstable system: m = (2c/delta)^(1/gamma),
/// n0 smallest integer with |a|^n0 >= m sqrt(a^2-1) / (sigma_z Qinv((1-delta/2)/2)).
MagnitudeDesign magnitude_design(double c, double gamma, double delta, double a,
                                 double sigma_z);

/// Mean squared innovation over states.size()-1 innovations; rejects H0 iff
/// the mean is >= sigma_z^2 + t. Needs at least two states.
Decision innovation_energy_decide(std::span<const double> states, double a,
                                  double sigma_z, double t);

struct InnovationEnergyDesign {
    int k0;
    double t;
};

/// Chebyshev design of the innovation-energy test: the smallest window
/// guaranteeing alpha <= delta/2 and beta <= delta/2 against average
/// control energy e_u.
InnovationEnergyDesign innovation_energy_design(double delta, const NoiseModel &noise,
                                                double e_u);

/// Normalized one-step prediction error at the reset time, compared to t^2.
Decision reset_chi_square_decide(double x_tau, double x_tau1, double a,
                                 double sigma_z, double t);

struct ChiSquareDesign {
    double t;      ///< midpoint of the feasible threshold interval
    bool feasible; ///< false when no threshold meets both error targets
};

/// Threshold interval Qinv(delta/4) <= t <= sqrt((1+a^2)/(1-a^2)) Qinv((2-delta)/4);
/// infeasibility is a valid answer (the covert regime).
ChiSquareDesign reset_chi_square_design(double delta, double a);

/// Optimal quadratic statistic for the known-tau reset test; equals
/// x' (S0^{-1} - S1^{-1}) x for the stationary/reset covariance pair.
double reset_quadratic_statistic(std::span<const double> states, double a,
                                 double sigma_z, int tau);

/// Two-covariance Gaussian log-likelihood-ratio test. Cholesky factors are
/// precomputed at construction; instances are immutable and shareable.
class GaussianLrt {
public:
    GaussianLrt(Matrix cov0, Matrix cov1, double log_threshold);

    int dim() const { return core_->chol0.dim(); }
    double log_threshold() const { return log_threshold_; }
    const Matrix &cov0() const { return core_->cov0; }
    const Matrix &cov1() const { return core_->cov1; }

    /// statistic = x'S0^{-1}x - x'S1^{-1}x + log(|S0|/|S1|); with
    /// log_threshold = 0 this is the minimal-error equal-priors test.
    Decision decide(std::span<const double> states) const;

private:
    struct Core {
        Matrix cov0, cov1;
        Cholesky chol0, chol1;
        double log_det_ratio; // log(|S0|/|S1|)
    };
    std::shared_ptr<const Core> core_;
    double log_threshold_;
};

struct MagnitudeSpec {
    double m;
    int n0;
};
struct InnovationEnergySpec {
    int k;
    double t;
};
struct ResetChiSquareSpec {
    double t;
    int tau;
};
struct ResetQuadraticSpec {
    double t_prime;
    int tau;
};

using DetectorSpec = std::variant<MagnitudeSpec, InnovationEnergySpec, ResetChiSquareSpec,
                                  ResetQuadraticSpec, GaussianLrt>;

/// Smallest trajectory length the detector can act on.
int detector_min_horizon(const DetectorSpec &spec);

/// Applies a detector to a realized state path (X_1..X_n).
Decision detector_decide(const DetectorSpec &spec, std::span<const double> states,
                         double a, double sigma_z);

} // namespace covertctl
