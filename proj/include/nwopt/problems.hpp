#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nwopt/core_types.hpp"

namespace nwopt {

/// Synthetic data-generating process:
///   gamma ~ Uniform[0,1]^p,  xi = intercept + slope * mean(gamma) + U,
///   U ~ Uniform[-noise_half_width, noise_half_width].
/// Valid generators keep xi inside [0,1] without clipping.
struct GeneratorSpec {
    std::size_t covariate_dim = 1;
    double intercept = 0.3;
    double slope = 0.4;
    double noise_half_width = 0.2;

    /// Throws InvalidGenerator if xi can leave [0,1] or a field is non-finite.
    void validate() const;

    /// Conditional mean of xi given the covariate.
    double conditional_mean(std::span<const double> gamma) const;
};

struct Optimum {
    std::vector<double> x;
    double value = 0.0;
};

/// Ground truth for a synthetic problem.
struct TrueConditionalOracle {
    /// E[l(x, xi) | gamma]
    std::function<double(std::span<const double> x, std::span<const double> gamma)>
        conditional_mean_loss;
    /// argmin and min of the conditional expected loss over the feasible box
    std::function<Optimum(std::span<const double> gamma)> true_optimum;
};

struct SyntheticProblem {
    ProblemSpec spec;
    TrueConditionalOracle oracle;
    GeneratorSpec generator;
};

/// l(x, xi) = (cu * (xi - x)_+ + co * (x - xi)_+) / max(cu, co), in [0,1]
/// whenever x and xi are. L_x = 1.
LossModel make_newsvendor_loss(double cu, double co, double lipschitz_gamma);

/// Normalized single-item newsvendor on X = [0,1]:
///   l(x, xi) = (cu * (xi - x)_+ + co * (x - xi)_+) / max(cu, co).
/// L_x = 1 and L_gamma = |slope| / sqrt(p): the conditional expected loss is
/// a 1-Lipschitz function of the conditional mean, whose gradient in gamma
/// has norm |slope| / sqrt(p).
SyntheticProblem make_newsvendor(double cu, double co, const GeneratorSpec& gen);

/// n i.i.d. draws; draw i uses its own stream keyed by (seed, i).
Dataset sample_dataset(const GeneratorSpec& gen, std::size_t n, std::uint64_t seed);

double true_conditional_loss(const TrueConditionalOracle& oracle, std::span<const double> x,
                             std::span<const double> gamma);

/// E[l(x, xi) | gamma] by adaptive Gauss-Kronrod quadrature of the loss
/// against the uniform noise density, split at xi = x[0]. Used to
/// cross-check closed forms.
double quadrature_conditional_loss(const LossModel& loss, const GeneratorSpec& gen,
                                   std::span<const double> x, std::span<const double> gamma,
                                   double tolerance = 1e-10);

}  // namespace nwopt
