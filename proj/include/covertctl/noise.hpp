// Process noise models: Gaussian, Uniform on [-B, B], and a symmetric
// truncated Gaussian on [-B, B]. Second and fourth moments are exact for
// the first two and computed by quadrature for the truncated case.
#pragma once

#include "covertctl/rng.hpp"

namespace covertctl {

enum class NoiseKind { Gaussian, Uniform, TruncatedGaussian };

class NoiseModel {
public:
    static NoiseModel gaussian(double sigma_z);
    static NoiseModel uniform(double bound_b);
    static NoiseModel truncated_gaussian(double sigma_z, double bound_b);

    NoiseKind kind() const { return kind_; }

    /// Underlying normal std-dev; meaningful for the Gaussian kinds only.
    double sigma_z() const { return sigma_z_; }

    /// Support bound B; meaningful for Uniform and TruncatedGaussian.
    double bound_b() const { return bound_b_; }
    bool bounded() const { return kind_ != NoiseKind::Gaussian; }

    /// Var[Z]. Exact for Gaussian (sigma^2) and Uniform (B^2/3).
    double variance() const;
    double std_dev() const;

    /// E[Z^4]. Exact for Gaussian (3 sigma^4) and Uniform (B^4/5).
    double fourth_moment() const;

    /// One draw; consumes exactly one uniform from the stream for every kind.
    double sample(CounterRng &rng) const;

private:
    NoiseModel(NoiseKind kind, double sigma_z, double bound_b)
        : kind_(kind), sigma_z_(sigma_z), bound_b_(bound_b) {}

    NoiseKind kind_;
    double sigma_z_;
    double bound_b_;
};

} // namespace covertctl
