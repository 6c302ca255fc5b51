#pragma once

#include <cstddef>
#include <cstdint>

#include "nwopt/core_types.hpp"

namespace nwopt {

/// Volume of the Euclidean unit ball in R^p: pi^(p/2) / Gamma(p/2 + 1).
double ball_volume_constant(std::size_t p);

/// min(1, c * f * h^p), a lower bound on the probability that one covariate
/// sample lands within h of the query. h = 0 gives 0.
double ball_probability_floor(std::size_t p, double h, double density_floor);

/// 2 * exp(-n c f h^p eps^2 / 2) before clamping; may exceed 1.
double generalization_failure_prob_raw(std::size_t n, std::size_t p, double h, double epsilon,
                                       double density_floor);

/// Probability that |E - E_hat| > L_gamma h + eps may fail to hold, clamped to
/// [0,1]. Throws EpsilonOutOfRange unless 0 <= eps <= 1.
double generalization_failure_prob(std::size_t n, std::size_t p, double h, double epsilon,
                                   double density_floor);

struct GeneralizationBound {
    double bias_term = 0.0;       ///< L_gamma * h
    double deviation_term = 0.0;  ///< eps
    double failure_probability = 1.0;
    double raw_failure_probability = 2.0;

    double total() const noexcept { return bias_term + deviation_term; }
};

GeneralizationBound generalization_bound(std::size_t n, std::size_t p, double h, double epsilon,
                                         double density_floor, double lipschitz_gamma);

/// Size of a tau-net for a set of diameter D in R^d under the chosen mode.
double covering_number(double diameter, double tau, std::size_t d, const Covering& covering);

/// Bandwidth minimizing 2 L_gamma h + 2 sqrt(2 log(2N/delta) / (n c f h^p)):
///   h(n) = (2 L_gamma^2 n c f / (p^2 log(2N/delta)))^(-1/(p+2)),
/// with N = covering_number(D, tau, d). Throws DegenerateBound if 2N/delta <= 1.
double optimal_bandwidth(std::size_t n, const BoundParams& params);

struct SuboptimalityBound {
    double statistical_term = 0.0;
    double discretization_term = 0.0;  ///< 4 L_x tau
    double total = 0.0;
    double optimal_bandwidth = 0.0;
    double covering_number = 1.0;
};

/// Closed-form gap bound holding with probability at least 1 - delta.
SuboptimalityBound suboptimality_bound(std::size_t n, const BoundParams& params);

struct SampleComplexity {
    std::uint64_t samples = 0;  ///< ceil(raw)
    double raw = 0.0;
    double tau = 0.0;           ///< eps / (8 L_x)
    double covering_number = 1.0;
};

/// Sufficient n for a gap of at most eps with probability 1 - delta. The
/// tau and delta stored in params are ignored: tau is eps / (8 L_x).
/// Throws InvalidArgument unless eps and delta are in (0,1).
SampleComplexity sample_complexity(double epsilon, double delta, const BoundParams& params);

}  // namespace nwopt
