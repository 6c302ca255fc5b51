#include "nwopt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nwopt/error.hpp"
#include "nwopt/random.hpp"

namespace nwopt {
namespace {

// Expected normalized newsvendor loss when x - E[xi|gamma] = offset and the
// noise is Uniform[-w, w].
double newsvendor_expected_loss(double offset, double w, double cu, double co)
{
    const double scale = std::max(cu, co);
    if (w == 0.0) {
        return (cu * std::max(-offset, 0.0) + co * std::max(offset, 0.0)) / scale;
    }
    double shortage = 0.0;  // E[(U - offset)_+]
    double surplus = 0.0;   // E[(offset - U)_+]
    if (offset <= -w) {
        shortage = -offset;
    } else if (offset >= w) {
        surplus = offset;
    } else {
        shortage = (w - offset) * (w - offset) / (4.0 * w);
        surplus = (offset + w) * (offset + w) / (4.0 * w);
    }
    return (cu * shortage + co * surplus) / scale;
}

}  // namespace

void GeneratorSpec::validate() const
{
    if (covariate_dim == 0) {
        throw Error(ErrorCode::InvalidGenerator, "covariate_dim must be >= 1");
    }
    if (!std::isfinite(intercept) || !std::isfinite(slope) || !std::isfinite(noise_half_width) ||
        noise_half_width < 0.0) {
        throw Error(ErrorCode::InvalidGenerator, "generator parameters must be finite, w >= 0");
    }
    const double lowest = std::min(intercept, intercept + slope) - noise_half_width;
    const double highest = std::max(intercept, intercept + slope) + noise_half_width;
    if (lowest < 0.0 || highest > 1.0) {
        throw Error(ErrorCode::InvalidGenerator,
                    "outcome range [" + std::to_string(lowest) + ", " + std::to_string(highest) +
                        "] leaves [0,1]");
    }
}

double GeneratorSpec::conditional_mean(std::span<const double> gamma) const
{
    double sum = 0.0;
    for (double g : gamma) {
        sum += g;
    }
    return intercept + slope * (sum / static_cast<double>(gamma.size()));
}

LossModel make_newsvendor_loss(double cu, double co, double lipschitz_gamma)
{
    if (!(std::isfinite(cu) && cu > 0.0 && std::isfinite(co) && co > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "newsvendor costs must be positive");
    }
    const double scale = std::max(cu, co);
    return LossModel(
        "newsvendor",
        [cu, co, scale](std::span<const double> x, std::span<const double> xi) {
            const double diff = xi[0] - x[0];
            return (cu * std::max(diff, 0.0) + co * std::max(-diff, 0.0)) / scale;
        },
        1.0, lipschitz_gamma);
}

SyntheticProblem make_newsvendor(double cu, double co, const GeneratorSpec& gen)
{
    gen.validate();
    if (gen.slope == 0.0) {
        throw Error(ErrorCode::InvalidGenerator,
                    "slope 0 gives L_gamma = 0; the bound formulas need L_gamma > 0");
    }

    LossModel loss = make_newsvendor_loss(
        cu, co, std::abs(gen.slope) / std::sqrt(static_cast<double>(gen.covariate_dim)));
    ProblemSpec spec(std::move(loss), FeasibleBox({0.0}, {1.0}), 1.0, gen.covariate_dim, 1);

    TrueConditionalOracle oracle;
    oracle.conditional_mean_loss = [gen, cu, co](std::span<const double> x,
                                                 std::span<const double> gamma) {
        return newsvendor_expected_loss(x[0] - gen.conditional_mean(gamma), gen.noise_half_width,
                                        cu, co);
    };
    oracle.true_optimum = [gen, cu, co](std::span<const double> gamma) {
        // the cu/(cu+co) quantile of mean + Uniform[-w, w]
        const double level = cu / (cu + co);
        const double mean = gen.conditional_mean(gamma);
        const double x = std::clamp(mean + gen.noise_half_width * (2.0 * level - 1.0), 0.0, 1.0);
        return Optimum{{x}, newsvendor_expected_loss(x - mean, gen.noise_half_width, cu, co)};
    };

    return SyntheticProblem{std::move(spec), std::move(oracle), gen};
}

Dataset sample_dataset(const GeneratorSpec& gen, std::size_t n, std::uint64_t seed)
{
    gen.validate();
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    }
    const std::size_t p = gen.covariate_dim;
    std::vector<double> covariates(n * p);
    std::vector<double> outcomes(n);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(derive_seed(seed, i));
        const std::span<double> gamma(covariates.data() + i * p, p);
        for (double& g : gamma) {
            g = rng.uniform();
        }
        const double noise = gen.noise_half_width * (2.0 * rng.uniform() - 1.0);
        outcomes[i] = gen.conditional_mean(gamma) + noise;
    }
    return Dataset(std::move(covariates), std::move(outcomes), n, p, 1);
}

double true_conditional_loss(const TrueConditionalOracle& oracle, std::span<const double> x,
                             std::span<const double> gamma)
{
    return oracle.conditional_mean_loss(x, gamma);
}

double quadrature_conditional_loss(const LossModel& loss, const GeneratorSpec& gen,
                                   std::span<const double> x, std::span<const double> gamma,
                                   double tolerance)
{
    const double mean = gen.conditional_mean(gamma);
    const double w = gen.noise_half_width;
    if (w == 0.0) {
        const double xi = mean;
        return loss(x, std::span<const double>(&xi, 1));
    }
    auto integrand = [&](double xi) {
        return loss(x, std::span<const double>(&xi, 1)) / (2.0 * w);
    };
    using boost::math::quadrature::gauss_kronrod;
    constexpr unsigned max_depth = 15;
    const double lo = mean - w;
    const double hi = mean + w;
    // split at the kink xi = x so each piece is smooth
    const double kink = x[0];
    if (kink <= lo || kink >= hi) {
        return gauss_kronrod<double, 31>::integrate(integrand, lo, hi, max_depth, tolerance);
    }
    return gauss_kronrod<double, 31>::integrate(integrand, lo, kink, max_depth, tolerance) +
           gauss_kronrod<double, 31>::integrate(integrand, kink, hi, max_depth, tolerance);
}

}  // namespace nwopt
