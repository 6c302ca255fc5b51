#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nwopt/random.hpp"
#include "nwopt/theory.hpp"
#include "test_util.hpp"

using namespace nwopt;
using nwopt::testing::throws_code;

namespace {

// Parameters whose covering number is exactly 100: scaled mode, D = tau = 1.
BoundParams hundred_point_net(double lipschitz_gamma = 1.0, std::size_t p = 1)
{
    BoundParams::Fields f;
    f.delta = 0.05;
    f.tau = 1.0;
    f.diameter = 1.0;
    f.lipschitz_gamma = lipschitz_gamma;
    f.covariate_dim = p;
    f.covering = {CoveringMode::scaled, 100.0};
    return BoundParams(f);
}

double two_term(double h, std::size_t n, std::size_t p, double lg, double f, double cover,
                double delta)
{
    const double c = ball_volume_constant(p);
    return 2.0 * lg * h +
           2.0 * std::sqrt(2.0 * std::log(2.0 * cover / delta) /
                           (static_cast<double>(n) * c * f * std::pow(h, static_cast<double>(p))));
}

}  // namespace

TEST(BallVolume, LowDimensions)
{
    EXPECT_NEAR(ball_volume_constant(1), 2.0, 1e-12);
    EXPECT_NEAR(ball_volume_constant(2), std::numbers::pi, 1e-12);
    EXPECT_NEAR(ball_volume_constant(3), 4.18879020478639098, 1e-12);
    EXPECT_NEAR(ball_volume_constant(4), 4.93480220054467931, 1e-12);
}

TEST(BallVolume, MonteCarloAgreesWithinThreeStandardErrors)
{
    constexpr std::size_t draws = 200'000;
    for (std::size_t p = 1; p <= 4; ++p) {
        CounterRng rng(derive_seed(2024, p));
        std::size_t inside = 0;
        for (std::size_t i = 0; i < draws; ++i) {
            double sq = 0.0;
            for (std::size_t k = 0; k < p; ++k) {
                const double u = 3.0 * rng.uniform() - 1.5;
                sq += u * u;
            }
            inside += sq <= 1.0 ? 1 : 0;
        }
        const double cube = std::pow(3.0, static_cast<double>(p));
        const double frac = static_cast<double>(inside) / draws;
        const double estimate = cube * frac;
        const double se = cube * std::sqrt(frac * (1.0 - frac) / draws);
        EXPECT_LE(std::abs(estimate - ball_volume_constant(p)), 3.0 * se) << "p=" << p;
    }
}

TEST(BallProbabilityFloor, Examples)
{
    EXPECT_NEAR(ball_probability_floor(1, 0.1, 1.0), 0.2, 1e-15);
    EXPECT_EQ(ball_probability_floor(2, 0.0, 3.0), 0.0);
    EXPECT_EQ(ball_probability_floor(1, 10.0, 1.0), 1.0);
}

TEST(BallProbabilityFloor, MonteCarloInteriorQuery)
{
    CounterRng rng(99);
    constexpr std::size_t draws = 400'000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        hits += std::abs(rng.uniform() - 0.5) <= 0.1 ? 1 : 0;
    }
    const double frac = static_cast<double>(hits) / draws;
    EXPECT_NEAR(frac, ball_probability_floor(1, 0.1, 1.0), 3.0 * std::sqrt(0.16 / draws));
}

TEST(FailureProbability, Examples)
{
    EXPECT_EQ(generalization_failure_prob(100, 1, 0.1, 0.0, 1.0), 1.0);
    EXPECT_EQ(generalization_failure_prob_raw(100, 1, 0.1, 0.0, 1.0), 2.0);
    EXPECT_NEAR(generalization_failure_prob(1000, 1, 0.1, 0.5, 1.0), 2.7775887729928041e-11,
                2.7775887729928041e-11 * 1e-12);
    EXPECT_NEAR(generalization_failure_prob(2000, 1, 0.15, 0.3, 1.0), 3.7590576330781666e-12,
                3.7590576330781666e-12 * 1e-12);
}

TEST(FailureProbability, EpsilonRange)
{
    EXPECT_TRUE(throws_code(ErrorCode::EpsilonOutOfRange,
                            [] { generalization_failure_prob(10, 1, 0.1, 1.01, 1.0); }));
    EXPECT_TRUE(throws_code(ErrorCode::EpsilonOutOfRange,
                            [] { generalization_failure_prob(10, 1, 0.1, -0.1, 1.0); }));
    EXPECT_NO_THROW(generalization_failure_prob(10, 1, 0.1, 1.0, 1.0));
}

TEST(FailureProbability, MonotoneInEachArgument)
{
    double prev = 2.0;
    for (std::size_t n = 10; n < 100'000; n *= 3) {
        const double v = generalization_failure_prob(n, 2, 0.2, 0.3, 1.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    prev = 2.0;
    for (double h = 0.01; h < 2.0; h *= 1.5) {
        const double v = generalization_failure_prob(500, 2, h, 0.3, 1.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    prev = 2.0;
    for (double eps = 0.0; eps <= 1.0; eps += 0.05) {
        const double v = generalization_failure_prob(500, 1, 0.1, eps, 1.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    prev = 2.0;
    for (double f = 0.1; f < 5.0; f *= 1.3) {
        const double v = generalization_failure_prob(500, 1, 0.1, 0.2, f);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(GeneralizationBound, Terms)
{
    const auto b = generalization_bound(2000, 1, 0.15, 0.3, 1.0, 0.4);
    EXPECT_DOUBLE_EQ(b.bias_term, 0.4 * 0.15);
    EXPECT_EQ(b.deviation_term, 0.3);
    EXPECT_DOUBLE_EQ(b.total(), 0.06 + 0.3);
    EXPECT_EQ(b.failure_probability, generalization_failure_prob(2000, 1, 0.15, 0.3, 1.0));
}

TEST(CoveringNumber, BallMode)
{
    EXPECT_NEAR(covering_number(1.0, 0.1, 2, {}), 441.0, 1e-9);
    EXPECT_EQ(covering_number(1.0, 1.0, 3, {}), 1.0);
    EXPECT_EQ(covering_number(1.0, 5.0, 1, {}), 1.0);
    EXPECT_NEAR(covering_number(1.0, 0.25, 1, {}), 9.0, 1e-12);
}

TEST(CoveringNumber, ScaledMode)
{
    const Covering scaled{CoveringMode::scaled, 3.0};
    EXPECT_NEAR(covering_number(2.0, 0.5, 2, scaled), 48.0, 1e-12);
    EXPECT_EQ(covering_number(1.0, 2.0, 2, scaled), 3.0);
}

TEST(OptimalBandwidth, WorkedExample)
{
    EXPECT_NEAR(optimal_bandwidth(1000, hundred_point_net()), 0.12751723278594962,
                0.12751723278594962 * 1e-13);
}

TEST(OptimalBandwidth, MinimizesTwoTermBoundOnGrid)
{
    const double h_star = optimal_bandwidth(1000, hundred_point_net());
    double best_h = 0.0;
    double best_g = INFINITY;
    for (int k = 0; k < 2000; ++k) {
        const double h = std::pow(10.0, -4.0 + 5.0 * k / 1999.0);
        const double g = two_term(h, 1000, 1, 1.0, 1.0, 100.0, 0.05);
        if (g < best_g) {
            best_g = g;
            best_h = h;
        }
    }
    EXPECT_LT(std::abs(best_h - h_star) / h_star, 0.01);
}

TEST(OptimalBandwidth, DoublingScalesExactly)
{
    for (std::size_t p : {1u, 2u, 3u, 5u}) {
        const auto params = hundred_point_net(0.7, p);
        const double ratio = optimal_bandwidth(4000, params) / optimal_bandwidth(2000, params);
        const double expected = std::pow(2.0, -1.0 / static_cast<double>(p + 2));
        EXPECT_NEAR(ratio, expected, expected * 1e-12) << "p=" << p;
    }
}

TEST(OptimalBandwidth, HigherDimensionShrinksSlower)
{
    const std::size_t n = 10'000'000;
    EXPECT_GT(optimal_bandwidth(n, hundred_point_net(1.0, 2)),
              optimal_bandwidth(n, hundred_point_net(1.0, 1)));
}

TEST(SuboptimalityBound, DiscretizationTerm)
{
    BoundParams::Fields f;
    f.tau = 0.05;
    const auto b = suboptimality_bound(1000, BoundParams(f));
    EXPECT_DOUBLE_EQ(b.discretization_term, 0.2);
    EXPECT_EQ(b.total, b.statistical_term + b.discretization_term);
    EXPECT_GT(b.statistical_term, 0.0);
    EXPECT_EQ(b.covering_number, covering_number(1.0, 0.05, 1, {}));
}

TEST(SuboptimalityBound, StatisticalTermEqualsTwoTermAtOptimum)
{
    const auto b = suboptimality_bound(1000, hundred_point_net());
    EXPECT_NEAR(b.statistical_term, 0.76510339671569773, 0.76510339671569773 * 1e-12);
    const double g = two_term(b.optimal_bandwidth, 1000, 1, 1.0, 1.0, 100.0, 0.05);
    EXPECT_NEAR(b.statistical_term, g, g * 1e-10);
}

TEST(SuboptimalityBound, LargeSampleLimitIsDiscretization)
{
    BoundParams::Fields f;
    f.tau = 0.05;
    const auto b = suboptimality_bound(std::size_t{1} << 62, BoundParams(f));
    EXPECT_NEAR(b.total, 0.2, 1e-4);
}

TEST(SampleComplexity, WorkedExample)
{
    const auto s = sample_complexity(0.2, 0.05, BoundParams(BoundParams::Fields{}));
    EXPECT_EQ(s.samples, 436500u);
    EXPECT_NEAR(s.raw, 436499.74487446425, 436499.74487446425 * 1e-12);
    EXPECT_DOUBLE_EQ(s.tau, 0.025);
    EXPECT_NEAR(s.covering_number, 81.0, 1e-9);
}

TEST(SampleComplexity, HalvingEpsilonScalesPowerLaw)
{
    const BoundParams params(BoundParams::Fields{});
    const auto a = sample_complexity(0.2, 0.05, params);
    const auto b = sample_complexity(0.1, 0.05, params);
    // 2^(p+2) from the power, times the growth of the log factor.
    const double log_ratio = std::log(2.0 * b.covering_number / 0.05) /
                             std::log(2.0 * a.covering_number / 0.05);
    EXPECT_NEAR(b.raw / a.raw, 8.0 * log_ratio, 1e-9);
}

TEST(SampleComplexity, DecreasingInDensityFloor)
{
    std::uint64_t prev = UINT64_MAX;
    for (double f = 0.25; f <= 4.0; f *= 2.0) {
        BoundParams::Fields fields;
        fields.density_floor = f;
        const auto s = sample_complexity(0.2, 0.05, BoundParams(fields));
        EXPECT_LT(s.samples, prev);
        prev = s.samples;
    }
}

TEST(SampleComplexity, RejectsOutOfRange)
{
    const BoundParams params(BoundParams::Fields{});
    EXPECT_TRUE(throws_code(ErrorCode::InvalidArgument, [&] { sample_complexity(0.0, 0.05, params); }));
    EXPECT_TRUE(throws_code(ErrorCode::InvalidArgument, [&] { sample_complexity(1.0, 0.05, params); }));
    EXPECT_TRUE(throws_code(ErrorCode::InvalidArgument, [&] { sample_complexity(0.2, 1.0, params); }));
}
