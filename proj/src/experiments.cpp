#include "nwopt/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <string>

#include "nwopt/error.hpp"
#include "nwopt/nw_estimator.hpp"
#include "nwopt/optimizer.hpp"
#include "nwopt/parallel.hpp"
#include "nwopt/random.hpp"
#include "nwopt/stats.hpp"

namespace nwopt {
namespace {

std::string fmt(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

void check_vector(std::span<const double> v, std::size_t expected, const char* what)
{
    if (v.size() != expected) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has length " +
                                                      std::to_string(v.size()) + ", expected " +
                                                      std::to_string(expected));
    }
    for (double value : v) {
        if (!std::isfinite(value)) {
            throw Error(ErrorCode::NonFiniteEntry, what);
        }
    }
}

void check_params_match(const SyntheticProblem& problem, const BoundParams& params)
{
    if (params.covariate_dim() != problem.spec.covariate_dim() ||
        params.decision_dim() != problem.spec.decision_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "bound parameters do not match the problem");
    }
}

void check_fixed_point(const SyntheticProblem& problem, const FixedPointConfig& config)
{
    check_vector(config.x_fixed, problem.spec.decision_dim(), "x_fixed");
    check_vector(config.gamma_query, problem.spec.covariate_dim(), "gamma_query");
    if (!problem.spec.feasible().contains(config.x_fixed)) {
        throw Error(ErrorCode::InvalidArgument, "x_fixed lies outside the feasible box");
    }
    if (config.n == 0) {
        throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    }
    if (!(std::isfinite(config.bandwidth) && config.bandwidth > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
    }
    if (!(config.epsilon >= 0.0 && config.epsilon <= 1.0)) {
        throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0,1]");
    }
    if (config.trials < kMinCoverageTrials) {
        throw Error(ErrorCode::InvalidArgument,
                    "trials must be >= " + std::to_string(kMinCoverageTrials));
    }
}

// One fresh dataset and the full error decomposition at (x, gamma).
TrialRecord fixed_point_trial(const SyntheticProblem& problem, std::span<const double> x,
                              std::span<const double> gamma, std::size_t n, double h,
                              std::size_t index, std::uint64_t seed)
{
    const Dataset data = sample_dataset(problem.generator, n, seed);
    const NeighborSet ball = neighbors(data, gamma, h);
    const Estimate estimate = nw_estimate(data, problem.spec.loss(), x, ball);
    const Estimate surrogate = nw_conditional_mean_surrogate(data, problem.oracle, x, ball);

    TrialRecord r;
    r.trial_index = index;
    r.seed = seed;
    r.n = n;
    r.bandwidth = h;
    r.estimate = estimate.value;
    r.surrogate = surrogate.value;
    r.truth = true_conditional_loss(problem.oracle, x, gamma);
    r.abs_error = std::abs(r.truth - r.estimate);
    r.bias_component = std::abs(r.truth - r.surrogate);
    r.mad_component = std::abs(r.surrogate - r.estimate);
    r.neighbor_count = estimate.neighbor_count;
    r.empty_neighborhood = estimate.empty_neighborhood;
    return r;
}

void summarize(ExperimentReport& report)
{
    const auto& recs = report.records;
    std::size_t empty = 0;
    double err = 0.0;
    double bias = 0.0;
    double mad = 0.0;
    report.violations = 0;
    for (const auto& r : recs) {
        empty += r.empty_neighborhood ? 1 : 0;
        report.violations += r.bound_violated ? 1 : 0;
        err += r.abs_error;
        bias += r.bias_component;
        mad += r.mad_component;
    }
    const auto total = static_cast<double>(recs.size());
    report.empty_neighborhood_rate = static_cast<double>(empty) / total;
    report.empirical_violation_rate = static_cast<double>(report.violations) / total;
    report.mean_abs_error = err / total;
    report.mean_bias_component = bias / total;
    report.mean_mad_component = mad / total;
    report.binomial_upper_conf =
        stats::clopper_pearson_upper(report.violations, recs.size(), kConfidenceLevel);
    report.binomial_lower_conf =
        stats::clopper_pearson_lower(report.violations, recs.size(), kConfidenceLevel);
}

// The observed violation count is consistent with a true rate <= bound unless
// the one-sided 99% Clopper-Pearson lower limit already exceeds the bound.
Assertion violation_rate_assertion(const ExperimentReport& report, const std::string& name)
{
    Assertion a;
    a.name = name;
    a.passed = report.binomial_lower_conf <= report.theoretical_bound;
    a.detail = std::to_string(report.violations) + "/" + std::to_string(report.records.size()) +
               " violations, rate " + fmt(report.empirical_violation_rate) + ", 99% CP [" +
               fmt(report.binomial_lower_conf) + ", " + fmt(report.binomial_upper_conf) +
               "], bound " + fmt(report.theoretical_bound);
    return a;
}

Assertion triangle_assertion(const ExperimentReport& report)
{
    std::size_t bad = 0;
    for (const auto& r : report.records) {
        if (r.abs_error > r.bias_component + r.mad_component + kRoundoffTolerance) {
            ++bad;
        }
    }
    return {"triangle_inequality", bad == 0,
            std::to_string(bad) + " trials with |E-E_hat| > |E-m| + |m-E_hat|"};
}

std::vector<TrialRecord> run_fixed_point_trials(const SyntheticProblem& problem,
                                                const FixedPointConfig& config)
{
    std::vector<TrialRecord> records(config.trials);
    parallel_for(config.trials, config.workers, [&](std::size_t t) {
        records[t] = fixed_point_trial(problem, config.x_fixed, config.gamma_query, config.n,
                                       config.bandwidth, t, derive_seed(config.base_seed, t));
    });
    return records;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept
{
    switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::bias_mad: return "bias_mad";
    case ExperimentKind::rate: return "rate";
    case ExperimentKind::suboptimality: return "suboptimality";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view text)
{
    for (auto kind : {ExperimentKind::coverage, ExperimentKind::bias_mad, ExperimentKind::rate,
                      ExperimentKind::suboptimality}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown experiment '" + std::string(text) + "'");
}

bool ExperimentReport::passed() const noexcept
{
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const Assertion& a) { return a.passed; });
}

ExperimentReport run_coverage(const SyntheticProblem& problem, const FixedPointConfig& config)
{
    check_fixed_point(problem, config);
    const double radius = problem.spec.loss().lipschitz_gamma() * config.bandwidth + config.epsilon;

    ExperimentReport report;
    report.kind = ExperimentKind::coverage;
    report.records = run_fixed_point_trials(problem, config);
    for (auto& r : report.records) {
        r.bound_violated = r.abs_error > radius;
    }
    report.theoretical_bound_raw =
        generalization_failure_prob_raw(config.n, problem.spec.covariate_dim(), config.bandwidth,
                                        config.epsilon, problem.spec.density_floor());
    report.theoretical_bound = std::min(1.0, report.theoretical_bound_raw);
    report.theoretical_bound_formula = "min(1, 2*exp(-n*c*f*h^p*eps^2/2)), c = pi^(p/2)/Gamma(p/2+1)";
    summarize(report);

    report.assertions.push_back(violation_rate_assertion(report, "violation_rate_within_bound"));
    report.assertions.push_back(triangle_assertion(report));
    return report;
}

ExperimentReport run_bias_mad(const SyntheticProblem& problem, const FixedPointConfig& config)
{
    check_fixed_point(problem, config);
    const double bias_cap = problem.spec.loss().lipschitz_gamma() * config.bandwidth;

    ExperimentReport report;
    report.kind = ExperimentKind::bias_mad;
    report.records = run_fixed_point_trials(problem, config);
    for (auto& r : report.records) {
        const double cap = bias_cap + (r.empty_neighborhood ? 1.0 : 0.0);
        r.bound_violated = r.bias_component > cap + kRoundoffTolerance;
    }
    report.theoretical_bound = 0.0;
    report.theoretical_bound_raw = 0.0;
    report.theoretical_bound_formula = "|E - m| <= L_gamma*h + 1{empty} holds in every trial";
    summarize(report);

    const std::size_t nonempty = static_cast<std::size_t>(std::count_if(
        report.records.begin(), report.records.end(),
        [](const TrialRecord& r) { return !r.empty_neighborhood; }));
    report.assertions.push_back(
        {"bias_bound_every_trial", report.violations == 0,
         std::to_string(report.violations) + " violations of |E-m| <= L_gamma*h + 1{empty} over " +
             std::to_string(report.records.size()) + " trials (" + std::to_string(nonempty) +
             " with a nonempty neighborhood)"});
    report.assertions.push_back(triangle_assertion(report));
    return report;
}

ExperimentReport run_rate(const SyntheticProblem& problem, const RateConfig& config,
                          const BoundParams& params)
{
    check_params_match(problem, params);
    check_vector(config.x_fixed, problem.spec.decision_dim(), "x_fixed");
    check_vector(config.gamma_query, problem.spec.covariate_dim(), "gamma_query");
    if (config.n_grid.size() < 2 || config.trials_per_n == 0) {
        throw Error(ErrorCode::InvalidArgument, "rate needs >= 2 grid points and trials_per_n >= 1");
    }
    if (std::any_of(config.n_grid.begin(), config.n_grid.end(), [](std::size_t n) { return n == 0; })) {
        throw Error(ErrorCode::InvalidArgument, "n_grid entries must be >= 1");
    }

    const std::size_t per_n = config.trials_per_n;
    std::vector<double> bandwidths;
    for (std::size_t n : config.n_grid) {
        bandwidths.push_back(optimal_bandwidth(n, params));
    }

    ExperimentReport report;
    report.kind = ExperimentKind::rate;
    report.records.resize(config.n_grid.size() * per_n);
    parallel_for(report.records.size(), config.workers, [&](std::size_t i) {
        const std::size_t k = i / per_n;
        report.records[i] =
            fixed_point_trial(problem, config.x_fixed, config.gamma_query, config.n_grid[k],
                              bandwidths[k], i, derive_seed(config.base_seed, i));
    });
    summarize(report);
    report.theoretical_bound_formula.clear();

    std::vector<double> log_n;
    std::vector<double> log_err;
    bool positive = true;
    for (std::size_t k = 0; k < config.n_grid.size(); ++k) {
        RatePoint point;
        point.n = config.n_grid[k];
        point.bandwidth = bandwidths[k];
        std::size_t empty = 0;
        double sum = 0.0;
        for (std::size_t t = 0; t < per_n; ++t) {
            const auto& r = report.records[k * per_n + t];
            sum += r.abs_error;
            empty += r.empty_neighborhood ? 1 : 0;
        }
        point.mean_abs_error = sum / static_cast<double>(per_n);
        point.empty_neighborhood_rate = static_cast<double>(empty) / static_cast<double>(per_n);
        positive = positive && point.mean_abs_error > 0.0;
        log_n.push_back(std::log(static_cast<double>(point.n)));
        log_err.push_back(std::log(point.mean_abs_error));
        report.rate_points.push_back(point);
    }

    const double p = static_cast<double>(problem.spec.covariate_dim());
    report.expected_rate_slope = -1.0 / (p + 2.0);
    Assertion slope{"rate_slope_in_window", false, "mean error is zero at some n"};
    if (positive) {
        report.fitted_rate_slope = stats::least_squares_slope(log_n, log_err);
        const double diff = std::abs(*report.fitted_rate_slope - *report.expected_rate_slope);
        slope.passed = diff <= config.slope_window;
        slope.detail = "fitted " + fmt(*report.fitted_rate_slope) + ", expected " +
                       fmt(*report.expected_rate_slope) + " +/- " + fmt(config.slope_window);
    }
    report.assertions.push_back(slope);

    const bool bounded = std::all_of(report.records.begin(), report.records.end(),
                                     [](const TrialRecord& r) { return r.abs_error <= 1.0; });
    report.assertions.push_back({"errors_within_loss_range", bounded, "every |E - E_hat| <= 1"});
    return report;
}

ExperimentReport run_suboptimality(const SyntheticProblem& problem,
                                   const SuboptimalityConfig& config, const BoundParams& params)
{
    check_params_match(problem, params);
    check_vector(config.gamma_query, problem.spec.covariate_dim(), "gamma_query");
    if (config.n == 0 || config.trials == 0) {
        throw Error(ErrorCode::InvalidArgument, "n and trials must be >= 1");
    }

    const SuboptimalityBound bound = suboptimality_bound(config.n, params);
    const double h = bound.optimal_bandwidth;
    const TauNet net = build_tau_net(problem.spec.feasible(), params.tau());
    const Optimum best = problem.oracle.true_optimum(config.gamma_query);

    ExperimentReport report;
    report.kind = ExperimentKind::suboptimality;
    report.suboptimality = bound;
    report.records.resize(config.trials);
    parallel_for(config.trials, config.workers, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(config.base_seed, t);
        const Dataset data = sample_dataset(problem.generator, config.n, seed);
        const SolveResult solved = solve_nw(data, problem.spec, config.gamma_query, h, net);
        const NeighborSet ball = neighbors(data, config.gamma_query, h);

        TrialRecord r;
        r.trial_index = t;
        r.seed = seed;
        r.n = config.n;
        r.bandwidth = h;
        r.estimate = solved.objective_value;
        r.truth = true_conditional_loss(problem.oracle, solved.x_hat, config.gamma_query);
        r.surrogate =
            nw_conditional_mean_surrogate(data, problem.oracle, solved.x_hat, ball).value;
        r.abs_error = std::abs(r.truth - r.estimate);
        r.bias_component = std::abs(r.truth - r.surrogate);
        r.mad_component = std::abs(r.surrogate - r.estimate);
        r.neighbor_count = solved.neighbor_count;
        r.empty_neighborhood = solved.empty_neighborhood;
        r.gap = r.truth - best.value;
        r.bound_violated = *r.gap > bound.total;
        report.records[t] = r;
    });

    report.theoretical_bound = params.delta();
    report.theoretical_bound_raw = params.delta();
    report.theoretical_bound_formula = "delta (gap bound holds with probability >= 1 - delta)";
    summarize(report);

    double max_gap = -1.0;
    std::size_t negative = 0;
    for (const auto& r : report.records) {
        max_gap = std::max(max_gap, *r.gap);
        negative += *r.gap < -kRoundoffTolerance ? 1 : 0;
    }
    report.max_gap = max_gap;

    report.assertions.push_back(violation_rate_assertion(report, "violation_rate_within_delta"));
    report.assertions.push_back({"gap_nonnegative", negative == 0,
                                 std::to_string(negative) + " trials with gap < -1e-12, max gap " +
                                     fmt(max_gap) + ", bound " + fmt(bound.total)});
    return report;
}

}  // namespace nwopt
