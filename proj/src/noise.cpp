#include "covertctl/noise.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "covertctl/normal.hpp"

namespace covertctl {

namespace {

// 32-node Gauss-Legendre rule on [-1, 1], positive half; weights/nodes are
// mirrored for the negative half. Plenty for smooth integrands on [-B, B].
constexpr int kHalfNodes = 16;
constexpr std::array<double, kHalfNodes> kNodes = {
    0.04830766568773832, 0.14447196158279649, 0.23928736225213707, 0.33186860228212765,
    0.42135127613063535, 0.50689990893222939, 0.58771575724076233, 0.66304426693021520,
    0.73218211874028968, 0.79448379596794241, 0.84936761373256997, 0.89632115576605212,
    0.93490607593773969, 0.96476225558750643, 0.98561151154526834, 0.99726386184948156};
constexpr std::array<double, kHalfNodes> kWeights = {
    0.09654008851472780, 0.09563872007927486, 0.09384439908080457, 0.09117387869576388,
    0.08765209300440381, 0.08331192422694676, 0.07819389578707031, 0.07234579410884851,
    0.06582222277636185, 0.05868409347853555, 0.05099805926237618, 0.04283589802222668,
    0.03427386291302143, 0.02539206530926206, 0.01627439473090567, 0.00701861000947010};

template <typename F> double integrate_symmetric(double b, F f) {
    // integral of f over [-b, b], nodes mirrored across zero
    double s = 0.0;
    for (int i = 0; i < kHalfNodes; ++i) {
        const double x = b * kNodes[i];
        s += kWeights[i] * (f(x) + f(-x));
    }
    return b * s;
}

double truncated_mass(double sigma, double b) {
    return normal_cdf(b / sigma) - normal_cdf(-b / sigma);
}

double truncated_moment(double sigma, double b, int power) {
    const double mass = truncated_mass(sigma, b);
    const double val = integrate_symmetric(b, [&](double z) {
        return std::pow(z, power) * normal_pdf(z / sigma) / sigma;
    });
    return val / mass;
}

} // namespace

NoiseModel NoiseModel::gaussian(double sigma_z) {
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("NoiseModel: sigma_z must be > 0");
    return {NoiseKind::Gaussian, sigma_z, 0.0};
}

NoiseModel NoiseModel::uniform(double bound_b) {
    if (!(bound_b > 0.0))
        throw std::invalid_argument("NoiseModel: bound_b must be > 0");
    return {NoiseKind::Uniform, 0.0, bound_b};
}

NoiseModel NoiseModel::truncated_gaussian(double sigma_z, double bound_b) {
    if (!(sigma_z > 0.0))
        throw std::invalid_argument("NoiseModel: sigma_z must be > 0");
    if (!(bound_b > 0.0))
        throw std::invalid_argument("NoiseModel: bound_b must be > 0");
    return {NoiseKind::TruncatedGaussian, sigma_z, bound_b};
}

double NoiseModel::variance() const {
    switch (kind_) {
    case NoiseKind::Gaussian:
        return sigma_z_ * sigma_z_;
    case NoiseKind::Uniform:
        return bound_b_ * bound_b_ / 3.0;
    case NoiseKind::TruncatedGaussian:
        return truncated_moment(sigma_z_, bound_b_, 2);
    }
    return 0.0;
}

double NoiseModel::std_dev() const { return std::sqrt(variance()); }

double NoiseModel::fourth_moment() const {
    switch (kind_) {
    case NoiseKind::Gaussian:
        return 3.0 * sigma_z_ * sigma_z_ * sigma_z_ * sigma_z_;
    case NoiseKind::Uniform:
        return bound_b_ * bound_b_ * bound_b_ * bound_b_ / 5.0;
    case NoiseKind::TruncatedGaussian:
        return truncated_moment(sigma_z_, bound_b_, 4);
    }
    return 0.0;
}

double NoiseModel::sample(CounterRng &rng) const {
    const double u = rng.next_uniform();
    switch (kind_) {
    case NoiseKind::Gaussian:
        return sigma_z_ * normal_quantile(u);
    case NoiseKind::Uniform:
        return bound_b_ * (2.0 * u - 1.0);
    case NoiseKind::TruncatedGaussian: {
        const double lo = normal_cdf(-bound_b_ / sigma_z_);
        const double hi = normal_cdf(bound_b_ / sigma_z_);
        return sigma_z_ * normal_quantile(lo + u * (hi - lo));
    }
    }
    return 0.0;
}

} // namespace covertctl
