#include "nwopt/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nwopt/config.hpp"
#include "nwopt/error.hpp"
#include "nwopt/io.hpp"
#include "nwopt/nw_estimator.hpp"
#include "nwopt/optimizer.hpp"
#include "nwopt/parallel.hpp"
#include "nwopt/problems.hpp"
#include "nwopt/theory.hpp"

namespace nwopt::cli {
namespace {

using io::format_real;

struct BoundOptions {
    BoundParams::Fields fields;
    std::string covering_mode = "ball";
};

void add_bound_options(CLI::App* sub, BoundOptions& o, bool with_tau)
{
    sub->add_option("--p", o.fields.covariate_dim, "covariate dimension")->capture_default_str();
    sub->add_option("--d", o.fields.decision_dim, "decision dimension")->capture_default_str();
    sub->add_option("--lipschitz-x", o.fields.lipschitz_x)->capture_default_str();
    sub->add_option("--lipschitz-gamma", o.fields.lipschitz_gamma)->capture_default_str();
    sub->add_option("--density-floor", o.fields.density_floor)->capture_default_str();
    sub->add_option("--diameter", o.fields.diameter, "diameter D of the feasible set")
        ->capture_default_str();
    sub->add_option("--delta", o.fields.delta)->required();
    if (with_tau) {
        sub->add_option("--tau", o.fields.tau)->required();
    }
    sub->add_option("--covering-mode", o.covering_mode, "ball | scaled")->capture_default_str();
    sub->add_option("--covering-constant", o.fields.covering.constant,
                    "multiplier in scaled mode")
        ->capture_default_str();
}

BoundParams make_params(BoundOptions o)
{
    o.fields.covering.mode = covering_mode_from_string(o.covering_mode);
    return BoundParams(o.fields);
}

void print(std::ostream& out, std::string_view key, double value)
{
    out << key << ' ' << format_real(value) << '\n';
}

void print(std::ostream& out, std::string_view key, std::string_view value)
{
    out << key << ' ' << value << '\n';
}

std::string_view flag(bool b) { return b ? "true" : "false"; }

void print_covering(std::ostream& out, const BoundParams& params, double covering)
{
    print(out, "covering_mode", to_string(params.covering().mode));
    if (params.covering().mode == CoveringMode::scaled) {
        print(out, "covering_constant", params.covering().constant);
    }
    print(out, "covering_number", covering);
}

LossModel newsvendor_for(const Dataset& data, double cu, double co)
{
    if (data.outcome_dim() != 1) {
        throw Error(ErrorCode::DimensionMismatch,
                    "the newsvendor loss needs exactly one outcome column (xi1)");
    }
    return make_newsvendor_loss(cu, co, 1.0);
}

std::vector<double> decision_in_unit_box(const std::string& text)
{
    auto x = io::parse_real_list(text);
    if (x.size() != 1) {
        throw Error(ErrorCode::DimensionMismatch, "--x must have exactly one entry");
    }
    if (!(x[0] >= 0.0 && x[0] <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "--x must lie in [0,1]");
    }
    return x;
}

std::optional<std::uint64_t> seed_from_environment()
{
    const char* raw = std::getenv("NWOPT_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    std::uint64_t value = 0;
    const std::string_view text(raw);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, "NWOPT_SEED must be an unsigned integer");
    }
    return value;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Nadaraya-Watson contextual stochastic optimization toolkit", "nwopt"};
    app.require_subcommand(1);

    // estimate
    std::string data_path;
    std::string query_text;
    std::string x_text;
    double bandwidth = 0.0;
    double cu = 1.0;
    double co = 1.0;
    auto* estimate = app.add_subcommand("estimate", "Nadaraya-Watson estimate of E[loss | query]");
    estimate->add_option("--data", data_path, "dataset CSV")->required();
    estimate->add_option("--query", query_text, "covariate query, comma separated")->required();
    estimate->add_option("--x", x_text, "decision in [0,1]")->required();
    estimate->add_option("--bandwidth,-b", bandwidth)->required();
    estimate->add_option("--cu", cu, "newsvendor underage cost")->capture_default_str();
    estimate->add_option("--co", co, "newsvendor overage cost")->capture_default_str();

    // solve
    double tau = 0.0;
    std::string json_path;
    std::size_t workers = default_workers();
    std::size_t max_net_points = kDefaultMaxNetPoints;
    auto* solve = app.add_subcommand("solve", "Minimize the estimate over a tau-net of [0,1]");
    solve->add_option("--data", data_path, "dataset CSV")->required();
    solve->add_option("--query", query_text, "covariate query, comma separated")->required();
    solve->add_option("--bandwidth,-b", bandwidth)->required();
    solve->add_option("--tau", tau, "net resolution")->required();
    solve->add_option("--cu", cu)->capture_default_str();
    solve->add_option("--co", co)->capture_default_str();
    solve->add_option("--json", json_path, "also write the result as JSON");
    solve->add_option("--workers", workers)->capture_default_str();
    solve->add_option("--max-net-points", max_net_points)->capture_default_str();

    // theory
    std::size_t n = 0;
    BoundOptions bw_opts;
    auto* bw = app.add_subcommand("bandwidth", "Optimal bandwidth h(n)");
    bw->add_option("--n", n)->required();
    add_bound_options(bw, bw_opts, true);

    BoundOptions bound_opts;
    std::optional<double> epsilon;
    std::optional<double> fixed_bandwidth;
    auto* bound = app.add_subcommand("bound", "Suboptimality and generalization bounds");
    bound->add_option("--n", n)->required();
    add_bound_options(bound, bound_opts, true);
    bound->add_option("--epsilon", epsilon, "also report the fixed-x failure probability");
    bound->add_option("--bandwidth", fixed_bandwidth, "bandwidth for --epsilon (default h(n))");

    BoundOptions cx_opts;
    double target_gap = 0.0;
    auto* complexity = app.add_subcommand("complexity", "Samples sufficient for a target gap");
    complexity->add_option("--epsilon", target_gap, "target suboptimality gap")->required();
    add_bound_options(complexity, cx_opts, false);

    // experiment
    std::string config_path;
    std::string out_dir = ".";
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo verification config");
    experiment->add_option("config", config_path, "experiment JSON")->required();
    experiment->add_option("--out", out_dir, "directory for report files")->capture_default_str();
    experiment->add_option("--workers", workers)->capture_default_str();

    // generate
    GeneratorSpec gen;
    std::uint64_t seed = 0;
    std::string out_path;
    auto* generate = app.add_subcommand("generate", "Sample a synthetic newsvendor dataset");
    generate->add_option("--p", gen.covariate_dim)->capture_default_str();
    generate->add_option("--n", n)->required();
    generate->add_option("--seed", seed)->required();
    generate->add_option("--intercept", gen.intercept)->capture_default_str();
    generate->add_option("--slope", gen.slope)->capture_default_str();
    generate->add_option("--noise-half-width", gen.noise_half_width)->capture_default_str();
    generate->add_option("--out", out_path, "output CSV (stdout if omitted)");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (estimate->parsed()) {
            const Dataset data = io::read_dataset_csv_file(data_path);
            const LossModel loss = newsvendor_for(data, cu, co);
            const auto x = decision_in_unit_box(x_text);
            const auto query = io::parse_real_list(query_text);
            const Estimate e = nw_estimate(data, loss, x, query, bandwidth);
            print(out, "estimate", e.value);
            out << "neighbors " << e.neighbor_count << '\n';
            print(out, "empty_neighborhood", flag(e.empty_neighborhood));
            return kSuccess;
        }

        if (solve->parsed()) {
            const Dataset data = io::read_dataset_csv_file(data_path);
            const ProblemSpec problem(newsvendor_for(data, cu, co), FeasibleBox({0.0}, {1.0}), 1.0,
                                      data.covariate_dim(), 1);
            const auto query = io::parse_real_list(query_text);
            const SolveResult r = solve_nw(data, problem, query, bandwidth, tau,
                                           SolveOptions{workers, max_net_points});
            print(out, "x_hat", r.x_hat[0]);
            print(out, "objective", r.objective_value);
            print(out, "empty_neighborhood", flag(r.empty_neighborhood));
            out << "neighbors " << r.neighbor_count << '\n';
            out << "net_size " << r.net_size << '\n';
            if (!json_path.empty()) {
                nlohmann::ordered_json j;
                j["x_hat"] = r.x_hat;
                j["objective_value"] = r.objective_value;
                j["empty_neighborhood"] = r.empty_neighborhood;
                j["neighbor_count"] = r.neighbor_count;
                j["net_size"] = r.net_size;
                j["net_index"] = r.net_index;
                j["bandwidth"] = bandwidth;
                j["tau"] = tau;
                std::ofstream file(json_path, std::ios::binary);
                if (!(file << j.dump(2) << '\n')) {
                    throw Error(ErrorCode::IoError, "cannot write '" + json_path + "'");
                }
            }
            return kSuccess;
        }

        if (bw->parsed()) {
            const BoundParams params = make_params(bw_opts);
            print_covering(out, params,
                           covering_number(params.diameter(), params.tau(), params.decision_dim(),
                                           params.covering()));
            print(out, "bandwidth", optimal_bandwidth(n, params));
            return kSuccess;
        }

        if (bound->parsed()) {
            const BoundParams params = make_params(bound_opts);
            const SuboptimalityBound b = suboptimality_bound(n, params);
            print_covering(out, params, b.covering_number);
            print(out, "optimal_bandwidth", b.optimal_bandwidth);
            print(out, "statistical_term", b.statistical_term);
            print(out, "discretization_term", b.discretization_term);
            print(out, "total", b.total);
            if (epsilon) {
                const double h = fixed_bandwidth.value_or(b.optimal_bandwidth);
                const GeneralizationBound g =
                    generalization_bound(n, params.covariate_dim(), h, *epsilon,
                                         params.density_floor(), params.lipschitz_gamma());
                print(out, "generalization_bandwidth", h);
                print(out, "generalization_bias_term", g.bias_term);
                print(out, "generalization_deviation_term", g.deviation_term);
                print(out, "failure_probability", g.failure_probability);
                print(out, "failure_probability_raw", g.raw_failure_probability);
            }
            return kSuccess;
        }

        if (complexity->parsed()) {
            cx_opts.fields.tau = 1.0;  // replaced by eps / (8 L_x)
            const BoundParams params = make_params(cx_opts);
            const SampleComplexity s = sample_complexity(target_gap, params.delta(), params);
            print_covering(out, params, s.covering_number);
            print(out, "tau", s.tau);
            print(out, "samples_raw", s.raw);
            out << "samples " << s.samples << '\n';
            return kSuccess;
        }

        if (experiment->parsed()) {
            const ExperimentConfig config =
                load_experiment_config(config_path, seed_from_environment());
            const ExperimentReport report = run_experiment(config, workers);

            std::filesystem::create_directories(out_dir);
            const auto base = std::filesystem::path(out_dir) / config.name;
            const std::string trials_path = base.string() + "_trials.csv";
            const std::string report_path = base.string() + "_report.json";
            {
                std::ofstream file(trials_path, std::ios::binary);
                io::write_trials_csv(file, report);
                if (!file) {
                    throw Error(ErrorCode::IoError, "cannot write '" + trials_path + "'");
                }
            }
            {
                std::ofstream file(report_path, std::ios::binary);
                if (!(file << report_to_json(config, report).dump(2) << '\n')) {
                    throw Error(ErrorCode::IoError, "cannot write '" + report_path + "'");
                }
            }
            out << "experiment " << config.name << " (" << to_string(config.kind) << ", "
                << report.records.size() << " trials)\n";
            for (const auto& a : report.assertions) {
                out << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
            }
            out << "report " << report_path << '\n';
            out << "trials " << trials_path << '\n';
            return report.passed() ? kSuccess : kAssertionFailed;
        }

        if (generate->parsed()) {
            const Dataset data = sample_dataset(gen, n, seed);
            if (out_path.empty()) {
                io::write_dataset_csv(out, data);
            } else {
                io::write_dataset_csv_file(out_path, data);
            }
            return kSuccess;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    err << "error: no subcommand\n";
    return kUsageError;
}

}  // namespace nwopt::cli
