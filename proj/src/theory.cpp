#include "nwopt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nwopt/error.hpp"

namespace nwopt {
namespace {

void require(bool ok, ErrorCode code, const std::string& message)
{
    if (!ok) {
        throw Error(code, message);
    }
}

// log(2 |X_tau| / delta), shared by the bandwidth and the gap bound.
double union_log_term(const BoundParams& params, double covering)
{
    const double ratio = 2.0 * covering / params.delta();
    require(ratio > 1.0, ErrorCode::DegenerateBound,
            "2|X_tau|/delta must exceed 1, got " + std::to_string(ratio));
    return std::log(ratio);
}

double params_covering(const BoundParams& params)
{
    return covering_number(params.diameter(), params.tau(), params.decision_dim(),
                           params.covering());
}

}  // namespace

double ball_volume_constant(std::size_t p)
{
    require(p >= 1, ErrorCode::InvalidArgument, "p must be >= 1");
    const double half = static_cast<double>(p) / 2.0;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double ball_probability_floor(std::size_t p, double h, double density_floor)
{
    require(std::isfinite(h) && h >= 0.0, ErrorCode::InvalidArgument, "h must be >= 0");
    require(std::isfinite(density_floor) && density_floor > 0.0, ErrorCode::InvalidArgument,
            "density_floor must be positive");
    const double value = ball_volume_constant(p) * density_floor * std::pow(h, static_cast<double>(p));
    return std::min(1.0, value);
}

double generalization_failure_prob_raw(std::size_t n, std::size_t p, double h, double epsilon,
                                       double density_floor)
{
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    require(epsilon >= 0.0 && epsilon <= 1.0, ErrorCode::EpsilonOutOfRange,
            "epsilon must lie in [0,1], got " + std::to_string(epsilon));
    require(std::isfinite(h) && h > 0.0, ErrorCode::InvalidArgument, "h must be positive");
    require(std::isfinite(density_floor) && density_floor > 0.0, ErrorCode::InvalidArgument,
            "density_floor must be positive");
    const double exponent = static_cast<double>(n) * ball_volume_constant(p) * density_floor *
                            std::pow(h, static_cast<double>(p)) * epsilon * epsilon / 2.0;
    return 2.0 * std::exp(-exponent);
}

double generalization_failure_prob(std::size_t n, std::size_t p, double h, double epsilon,
                                   double density_floor)
{
    return std::min(1.0, generalization_failure_prob_raw(n, p, h, epsilon, density_floor));
}

GeneralizationBound generalization_bound(std::size_t n, std::size_t p, double h, double epsilon,
                                         double density_floor, double lipschitz_gamma)
{
    require(std::isfinite(lipschitz_gamma) && lipschitz_gamma > 0.0, ErrorCode::InvalidArgument,
            "lipschitz_gamma must be positive");
    GeneralizationBound out;
    out.raw_failure_probability = generalization_failure_prob_raw(n, p, h, epsilon, density_floor);
    out.failure_probability = std::min(1.0, out.raw_failure_probability);
    out.bias_term = lipschitz_gamma * h;
    out.deviation_term = epsilon;
    return out;
}

double covering_number(double diameter, double tau, std::size_t d, const Covering& covering)
{
    require(std::isfinite(diameter) && diameter > 0.0, ErrorCode::InvalidArgument,
            "diameter must be positive");
    require(std::isfinite(tau) && tau > 0.0, ErrorCode::InvalidArgument, "tau must be positive");
    require(d >= 1, ErrorCode::InvalidArgument, "d must be >= 1");
    const double dim = static_cast<double>(d);
    switch (covering.mode) {
    case CoveringMode::ball:
        // any single point is within D of the whole set
        if (tau >= diameter) {
            return 1.0;
        }
        return std::pow(1.0 + 2.0 * diameter / tau, dim);
    case CoveringMode::scaled:
        require(covering.constant >= 1.0, ErrorCode::InvalidArgument,
                "covering constant must be >= 1");
        return covering.constant * std::pow(std::max(1.0, diameter / tau), dim);
    }
    return 1.0;
}

double optimal_bandwidth(std::size_t n, const BoundParams& params)
{
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    const double p = static_cast<double>(params.covariate_dim());
    const double c = ball_volume_constant(params.covariate_dim());
    const double log_term = union_log_term(params, params_covering(params));
    const double lg = params.lipschitz_gamma();
    const double base =
        2.0 * lg * lg * static_cast<double>(n) * c * params.density_floor() / (p * p * log_term);
    return std::pow(base, -1.0 / (p + 2.0));
}

SuboptimalityBound suboptimality_bound(std::size_t n, const BoundParams& params)
{
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    const double p = static_cast<double>(params.covariate_dim());
    const double c = ball_volume_constant(params.covariate_dim());
    const double covering = params_covering(params);
    const double log_term = union_log_term(params, covering);

    SuboptimalityBound out;
    out.covering_number = covering;
    out.optimal_bandwidth = optimal_bandwidth(n, params);
    const double inner = 2.0 * log_term / (static_cast<double>(n) * c * params.density_floor());
    out.statistical_term = 2.0 * std::pow(params.lipschitz_gamma(), p / (p + 2.0)) * (p + 2.0) /
                           std::pow(4.0 * std::pow(p, p), 1.0 / (p + 2.0)) *
                           std::pow(inner, 1.0 / (p + 2.0));
    out.discretization_term = 4.0 * params.lipschitz_x() * params.tau();
    out.total = out.statistical_term + out.discretization_term;
    return out;
}

SampleComplexity sample_complexity(double epsilon, double delta, const BoundParams& params)
{
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::InvalidArgument,
            "epsilon must lie in (0,1), got " + std::to_string(epsilon));
    require(delta > 0.0 && delta < 1.0, ErrorCode::InvalidArgument,
            "delta must lie in (0,1), got " + std::to_string(delta));
    const double p = static_cast<double>(params.covariate_dim());
    const double c = ball_volume_constant(params.covariate_dim());

    SampleComplexity out;
    out.tau = epsilon / (8.0 * params.lipschitz_x());
    out.covering_number =
        covering_number(params.diameter(), out.tau, params.decision_dim(), params.covering());
    const double ratio = 2.0 * out.covering_number / delta;
    require(ratio > 1.0, ErrorCode::DegenerateBound, "2|X_tau|/delta must exceed 1");
    out.raw = std::pow(2.0, 2.0 * p + 3.0) * std::pow(params.lipschitz_gamma(), p) *
              std::pow(p + 2.0, p + 2.0) * std::log(ratio) /
              (std::pow(p, p) * std::pow(epsilon, p + 2.0) * c * params.density_floor());
    const double ceiled = std::ceil(out.raw);
    require(std::isfinite(ceiled) && ceiled < 1.8e19, ErrorCode::DegenerateBound,
            "sample complexity overflows 64-bit range");
    out.samples = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ceiled));
    return out;
}

}  // namespace nwopt
