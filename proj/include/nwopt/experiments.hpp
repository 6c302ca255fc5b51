#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nwopt/core_types.hpp"
#include "nwopt/problems.hpp"
#include "nwopt/theory.hpp"

namespace nwopt {

inline constexpr double kConfidenceLevel = 0.99;
inline constexpr double kRoundoffTolerance = 1e-12;
inline constexpr double kDefaultSlopeWindow = 0.12;
inline constexpr std::size_t kMinCoverageTrials = 100;

enum class ExperimentKind { coverage, bias_mad, rate, suboptimality };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind experiment_kind_from_string(std::string_view text);

struct TrialRecord {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double bandwidth = 0.0;
    double estimate = 0.0;        ///< E_hat at (x, gamma)
    double truth = 0.0;           ///< E at (x, gamma)
    double surrogate = 0.0;       ///< neighbor average of E at the sampled covariates
    double abs_error = 0.0;       ///< |E - E_hat|
    double bias_component = 0.0;  ///< |E - surrogate|
    double mad_component = 0.0;   ///< |surrogate - E_hat|
    std::size_t neighbor_count = 0;
    bool empty_neighborhood = false;
    std::optional<double> gap;    ///< E(x_hat) - E(x*), suboptimality runs only
    bool bound_violated = false;
};

struct RatePoint {
    std::size_t n = 0;
    double bandwidth = 0.0;
    double mean_abs_error = 0.0;
    double empty_neighborhood_rate = 0.0;
};

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    ExperimentKind kind = ExperimentKind::coverage;
    std::vector<TrialRecord> records;

    std::size_t violations = 0;
    double empirical_violation_rate = 0.0;
    /// Reference probability the violation rate is compared against, and
    /// the formula that produced it.
    double theoretical_bound = 1.0;
    double theoretical_bound_raw = 1.0;
    std::string theoretical_bound_formula;
    double binomial_upper_conf = 1.0;
    double binomial_lower_conf = 0.0;

    double empty_neighborhood_rate = 0.0;
    double mean_abs_error = 0.0;
    double mean_bias_component = 0.0;
    double mean_mad_component = 0.0;

    std::optional<double> fitted_rate_slope;
    std::optional<double> expected_rate_slope;
    std::vector<RatePoint> rate_points;

    std::optional<SuboptimalityBound> suboptimality;
    std::optional<double> max_gap;

    std::vector<Assertion> assertions;

    bool passed() const noexcept;
};

/// Fixed (x, gamma) experiments: coverage and bias/MAD decomposition.
struct FixedPointConfig {
    std::vector<double> x_fixed;
    std::vector<double> gamma_query;
    std::size_t n = 0;
    double bandwidth = 0.0;
    double epsilon = 0.0;
    std::size_t trials = 0;
    std::uint64_t base_seed = 0;
    std::size_t workers = 1;
};

struct RateConfig {
    std::vector<double> x_fixed;
    std::vector<double> gamma_query;
    std::vector<std::size_t> n_grid;
    std::size_t trials_per_n = 0;
    std::uint64_t base_seed = 0;
    std::size_t workers = 1;
    double slope_window = kDefaultSlopeWindow;
};

struct SuboptimalityConfig {
    std::vector<double> gamma_query;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t base_seed = 0;
    std::size_t workers = 1;
};

/// Fresh dataset per trial; a trial violates when |E - E_hat| > L_gamma h + eps.
/// The empirical rate is compared with the clamped failure probability.
ExperimentReport run_coverage(const SyntheticProblem& problem, const FixedPointConfig& config);

/// Records |E - m| and |m - E_hat| per trial (m = surrogate) and checks the
/// deterministic bias bound |E - m| <= L_gamma h + 1{empty}.
ExperimentReport run_bias_mad(const SyntheticProblem& problem, const FixedPointConfig& config);

/// Mean absolute error at h = h(n) for each n, then the least-squares slope
/// of log(mean error) against log(n), expected near -1/(p+2).
ExperimentReport run_rate(const SyntheticProblem& problem, const RateConfig& config,
                          const BoundParams& params);

/// Solves over the tau-net at h = h(n) and measures the true gap of x_hat.
ExperimentReport run_suboptimality(const SyntheticProblem& problem,
                                   const SuboptimalityConfig& config, const BoundParams& params);

}  // namespace nwopt
