// Closed-form analytics: Gaussian KL divergence, the total-variation error
// bound, the stationary-covariance matrix identities (tridiagonal inverse,
// trace of the mixed product, log-determinant), and the covertness /
// detectability limits on gains and windows.
#pragma once

#include <map>
#include <span>
#include <string>

#include "covertctl/covariance.hpp"

namespace covertctl {

/// KL divergence in nats between N(mu0, cov0) and N(mu1, cov1):
/// (tr(S1^{-1} S0) + (mu1-mu0)' S1^{-1} (mu1-mu0) - n + log|S1|/|S0|) / 2.
/// Computed via Cholesky; tiny negative cancellation (> -1e-10) clamps to 0.
double gaussian_kl(std::span<const double> mu0, const CovMatrix &cov0,
                   std::span<const double> mu1, const CovMatrix &cov1);

/// Lower bound on alpha + beta of any test between P and Q with
/// D_KL(P||Q) = kl: 1 - sqrt(kl/2), clamped below at 0.
double error_sum_lower_bound(double kl);

/// tr(S1^{-1} S0) for stationary AR(1) covariances with gains a (S0) and
/// b (S1): ((n-2) b^2 - 2 (n-1) a b + n) / (1 - a^2).
double trace_ratio_ss(double a, double b, int n);

/// Tridiagonal inverse of the stationary covariance:
/// [S^{-1}]_ij = ((1 + a^2 1{2<=i<=n-1}) 1{i=j} - a 1{|i-j|=1}) / sigma_z^2.
/// The n = 1 case is the scalar inverse (1 - a^2) / sigma_z^2.
CovMatrix stationary_inverse(double a, double sigma_z, int n);

/// log det of the stationary covariance:
/// n log(sigma_z^2/(1-a^2)) + (n-1) log(1-a^2) = log(sigma_z^{2n}/(1-a^2)).
double stationary_logdet(double a, double sigma_z, int n);

/// KL between the uncontrolled stationary law and the law reset once at any
/// tau: log(1/(1-a^2)) / 2, independent of tau and n.
double reset_kl(double a);

/// Jensen bound on the KL against a tau-mixture: the p_tau-weighted average
/// of the per-tau divergences.
double mixture_kl_upper_bound(std::span<const double> kl_per_tau,
                              std::span<const double> p_tau);

/// Largest closed-loop gain |b| reachable with epsilon-covertness from gain
/// a: sqrt(1 - (1-a^2) e^{-4 eps^2}); always in (|a|, 1).
double covert_gain_bound(double a, double epsilon);

/// Largest gain |a| at which a single stationary reset stays
/// epsilon-covert: sqrt(1 - e^{-4 eps^2}).
double reset_covert_bound(double epsilon);

/// Smallest gain |a| at which the chi-square reset test can reach
/// (1-delta)-detection.
double reset_detect_gain_bound(double delta);

/// KL between the stationary laws with gains a and b over n samples:
/// (trace_ratio_ss(a,b,n) - n + log((1-a^2)/(1-b^2))) / 2.
double gain_change_kl(double a, double b, int n);

/// A named bound value together with the inputs that produced it.
struct BoundReport {
    enum class Direction { Upper, Lower };
    std::string name;
    double value = 0.0;
    std::map<std::string, double> inputs;
    Direction direction = Direction::Upper;
};

} // namespace covertctl
