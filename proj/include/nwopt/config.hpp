#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwopt/core_types.hpp"
#include "nwopt/experiments.hpp"
#include "nwopt/problems.hpp"

namespace nwopt {

/// Which synthetic problem an experiment runs on. Only the newsvendor family
/// ships today.
struct ProblemConfig {
    double cu = 1.0;
    double co = 1.0;
    GeneratorSpec generator{};

    SyntheticProblem build() const;
};

/// Validated contents of an experiment JSON file.
///
/// Schema (unknown keys are rejected):
///   name            string, optional
///   experiment      "coverage" | "bias_mad" | "rate" | "suboptimality"
///   seed            unsigned integer
///   problem         {type: "newsvendor", covariate_dim, cu, co, intercept,
///                    slope, noise_half_width}; all but type optional
///   coverage, bias_mad:  x_fixed, gamma_query, n, bandwidth, epsilon, trials
///   rate:           x_fixed, gamma_query, n_grid, trials_per_n, delta, tau,
///                   [covering_mode, covering_constant, slope_window]
///   suboptimality:  gamma_query, n, trials, delta, tau,
///                   [covering_mode, covering_constant]
struct ExperimentConfig {
    std::string name;
    ExperimentKind kind = ExperimentKind::coverage;
    std::uint64_t seed = 0;
    ProblemConfig problem;

    std::vector<double> x_fixed;
    std::vector<double> gamma_query;
    std::size_t n = 0;
    double bandwidth = 0.0;
    double epsilon = 0.0;
    std::size_t trials = 0;

    std::vector<std::size_t> n_grid;
    std::size_t trials_per_n = 0;
    double slope_window = kDefaultSlopeWindow;

    double delta = 0.0;
    double tau = 0.0;
    Covering covering{};

    /// Echo of the accepted configuration (with the effective seed).
    nlohmann::ordered_json echo;

    BoundParams bound_params(const SyntheticProblem& problem) const;
};

/// Throws Error(ParseError / InvalidArgument / ...) on any schema or range
/// violation, before any computation starts.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         std::optional<std::uint64_t> seed_override = {});

ExperimentConfig load_experiment_config(const std::string& path,
                                        std::optional<std::uint64_t> seed_override = {});

ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t workers);

nlohmann::ordered_json report_to_json(const ExperimentConfig& config,
                                      const ExperimentReport& report);

}  // namespace nwopt
