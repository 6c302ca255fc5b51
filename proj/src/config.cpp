#include "nwopt/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "nwopt/error.hpp"

namespace nwopt {
namespace {

using nlohmann::json;

// Reads typed fields from one JSON object and remembers which keys the
// schema allows, so leftovers can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where))
    {
        if (!obj_.is_object()) {
            fail(where_ + " must be a JSON object");
        }
    }

    bool has(const std::string& key)
    {
        allowed_.insert(key);
        return obj_.contains(key);
    }

    double real(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number()) {
            fail(path(key) + " must be a number");
        }
        return v.get<double>();
    }

    double real_or(const std::string& key, double fallback)
    {
        return has(key) ? real(key) : fallback;
    }

    std::uint64_t unsigned_int(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_unsigned()) {
            fail(path(key) + " must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_string()) {
            fail(path(key) + " must be a string");
        }
        return v.get<std::string>();
    }

    std::vector<double> reals(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_array() || v.empty()) {
            fail(path(key) + " must be a non-empty array of numbers");
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                fail(path(key) + " must contain only numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::size_t> counts(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_array() || v.empty()) {
            fail(path(key) + " must be a non-empty array of integers");
        }
        std::vector<std::size_t> out;
        for (const auto& e : v) {
            if (!e.is_number_unsigned()) {
                fail(path(key) + " must contain only non-negative integers");
            }
            out.push_back(e.get<std::size_t>());
        }
        return out;
    }

    const json& object(const std::string& key) { return at(key); }

    void reject_unknown() const
    {
        for (const auto& item : obj_.items()) {
            if (!allowed_.contains(item.key())) {
                fail("unknown key '" + item.key() + "' in " + where_);
            }
        }
    }

    [[noreturn]] static void fail(const std::string& message)
    {
        throw Error(ErrorCode::ParseError, message);
    }

private:
    const json& at(const std::string& key)
    {
        if (!has(key)) {
            fail("missing required key " + path(key));
        }
        return obj_.at(key);
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    const json& obj_;
    std::string where_;
    std::set<std::string> allowed_;
};

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument, message);
    }
}

ProblemConfig parse_problem(const json& node)
{
    ObjectReader r(node, "problem");
    const std::string type = r.text("type");
    if (type != "newsvendor") {
        ObjectReader::fail("problem.type must be \"newsvendor\", got \"" + type + "\"");
    }
    ProblemConfig out;
    if (r.has("covariate_dim")) {
        out.generator.covariate_dim = r.unsigned_int("covariate_dim");
    }
    out.cu = r.real_or("cu", out.cu);
    out.co = r.real_or("co", out.co);
    out.generator.intercept = r.real_or("intercept", out.generator.intercept);
    out.generator.slope = r.real_or("slope", out.generator.slope);
    out.generator.noise_half_width = r.real_or("noise_half_width", out.generator.noise_half_width);
    r.reject_unknown();
    return out;
}

void read_bound_fields(ObjectReader& r, ExperimentConfig& c)
{
    c.delta = r.real("delta");
    c.tau = r.real("tau");
    if (r.has("covering_mode")) {
        c.covering.mode = covering_mode_from_string(r.text("covering_mode"));
    }
    c.covering.constant = r.real_or("covering_constant", c.covering.constant);
}

}  // namespace

SyntheticProblem ProblemConfig::build() const
{
    return make_newsvendor(cu, co, generator);
}

BoundParams ExperimentConfig::bound_params(const SyntheticProblem& problem) const
{
    return BoundParams::for_problem(problem.spec, delta, tau, covering);
}

ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         std::optional<std::uint64_t> seed_override)
{
    ExperimentConfig c;
    try {
        ObjectReader r(doc, "config");
        c.kind = experiment_kind_from_string(r.text("experiment"));
        if (r.has("name")) {
            c.name = r.text("name");
        }
        c.seed = r.unsigned_int("seed");
        c.problem = parse_problem(r.object("problem"));

        switch (c.kind) {
        case ExperimentKind::coverage:
        case ExperimentKind::bias_mad:
            c.x_fixed = r.reals("x_fixed");
            c.gamma_query = r.reals("gamma_query");
            c.n = r.unsigned_int("n");
            c.bandwidth = r.real("bandwidth");
            c.epsilon = r.real("epsilon");
            c.trials = r.unsigned_int("trials");
            break;
        case ExperimentKind::rate:
            c.x_fixed = r.reals("x_fixed");
            c.gamma_query = r.reals("gamma_query");
            c.n_grid = r.counts("n_grid");
            c.trials_per_n = r.unsigned_int("trials_per_n");
            c.slope_window = r.real_or("slope_window", c.slope_window);
            read_bound_fields(r, c);
            break;
        case ExperimentKind::suboptimality:
            c.gamma_query = r.reals("gamma_query");
            c.n = r.unsigned_int("n");
            c.trials = r.unsigned_int("trials");
            read_bound_fields(r, c);
            break;
        }
        r.reject_unknown();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }

    if (seed_override) {
        c.seed = *seed_override;
    }

    // Range validation up front, so a bad file never starts a long run.
    const SyntheticProblem problem = c.problem.build();
    const std::size_t p = problem.spec.covariate_dim();
    const std::size_t d = problem.spec.decision_dim();
    require(c.gamma_query.size() == p,
            "gamma_query must have covariate_dim = " + std::to_string(p) + " entries");
    for (double g : c.gamma_query) {
        require(std::isfinite(g), "gamma_query entries must be finite");
    }
    if (c.kind != ExperimentKind::suboptimality) {
        require(c.x_fixed.size() == d, "x_fixed must have " + std::to_string(d) + " entries");
        require(problem.spec.feasible().contains(c.x_fixed), "x_fixed must lie in [0,1]");
    }
    switch (c.kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::bias_mad:
        require(c.n >= 1, "n must be >= 1");
        require(std::isfinite(c.bandwidth) && c.bandwidth > 0.0, "bandwidth must be positive");
        if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) {
            throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0,1]");
        }
        require(c.trials >= kMinCoverageTrials,
                "trials must be >= " + std::to_string(kMinCoverageTrials));
        break;
    case ExperimentKind::rate:
        require(c.n_grid.size() >= 2, "n_grid needs at least two entries");
        for (std::size_t n : c.n_grid) {
            require(n >= 1, "n_grid entries must be >= 1");
        }
        require(c.trials_per_n >= 1, "trials_per_n must be >= 1");
        require(std::isfinite(c.slope_window) && c.slope_window > 0.0,
                "slope_window must be positive");
        (void)c.bound_params(problem);
        break;
    case ExperimentKind::suboptimality:
        require(c.n >= 1 && c.trials >= 1, "n and trials must be >= 1");
        (void)c.bound_params(problem);
        break;
    }

    c.echo = nlohmann::ordered_json::parse(doc.dump());
    c.echo["seed"] = c.seed;
    if (c.name.empty()) {
        c.name = std::string(to_string(c.kind));
    }
    c.echo["name"] = c.name;
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        std::optional<std::uint64_t> seed_override)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    if (doc.is_object() && !doc.contains("name")) {
        doc["name"] = std::filesystem::path(path).stem().string();
    }
    return parse_experiment_config(doc, seed_override);
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t workers)
{
    const SyntheticProblem problem = config.problem.build();
    switch (config.kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::bias_mad: {
        FixedPointConfig fc;
        fc.x_fixed = config.x_fixed;
        fc.gamma_query = config.gamma_query;
        fc.n = config.n;
        fc.bandwidth = config.bandwidth;
        fc.epsilon = config.epsilon;
        fc.trials = config.trials;
        fc.base_seed = config.seed;
        fc.workers = workers;
        return config.kind == ExperimentKind::coverage ? run_coverage(problem, fc)
                                                       : run_bias_mad(problem, fc);
    }
    case ExperimentKind::rate: {
        RateConfig rc;
        rc.x_fixed = config.x_fixed;
        rc.gamma_query = config.gamma_query;
        rc.n_grid = config.n_grid;
        rc.trials_per_n = config.trials_per_n;
        rc.base_seed = config.seed;
        rc.workers = workers;
        rc.slope_window = config.slope_window;
        return run_rate(problem, rc, config.bound_params(problem));
    }
    case ExperimentKind::suboptimality: {
        SuboptimalityConfig sc;
        sc.gamma_query = config.gamma_query;
        sc.n = config.n;
        sc.trials = config.trials;
        sc.base_seed = config.seed;
        sc.workers = workers;
        return run_suboptimality(problem, sc, config.bound_params(problem));
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unhandled experiment kind");
}

nlohmann::ordered_json report_to_json(const ExperimentConfig& config,
                                      const ExperimentReport& report)
{
    nlohmann::ordered_json j;
    j["name"] = config.name;
    j["experiment"] = std::string(to_string(report.kind));
    j["config"] = config.echo;

    const SyntheticProblem problem = config.problem.build();
    nlohmann::ordered_json problem_meta;
    problem_meta["loss"] = problem.spec.loss().name();
    problem_meta["lipschitz_x"] = problem.spec.loss().lipschitz_x();
    problem_meta["lipschitz_gamma"] = problem.spec.loss().lipschitz_gamma();
    problem_meta["density_floor"] = problem.spec.density_floor();
    problem_meta["diameter"] = problem.spec.feasible().diameter();
    j["problem"] = problem_meta;

    nlohmann::ordered_json s;
    s["trials"] = report.records.size();
    s["violations"] = report.violations;
    s["empirical_violation_rate"] = report.empirical_violation_rate;
    if (!report.theoretical_bound_formula.empty()) {
        s["theoretical_bound"] = report.theoretical_bound;
        s["theoretical_bound_raw"] = report.theoretical_bound_raw;
        s["theoretical_bound_formula"] = report.theoretical_bound_formula;
    }
    s["binomial_upper_conf"] = report.binomial_upper_conf;
    s["binomial_lower_conf"] = report.binomial_lower_conf;
    s["confidence_level"] = kConfidenceLevel;
    s["empty_neighborhood_rate"] = report.empty_neighborhood_rate;
    s["mean_abs_error"] = report.mean_abs_error;
    s["mean_bias_component"] = report.mean_bias_component;
    s["mean_mad_component"] = report.mean_mad_component;
    if (report.fitted_rate_slope) {
        s["fitted_rate_slope"] = *report.fitted_rate_slope;
    }
    if (report.expected_rate_slope) {
        s["expected_rate_slope"] = *report.expected_rate_slope;
        s["expected_rate_slope_formula"] = "-1/(p+2)";
    }
    if (report.max_gap) {
        s["max_gap"] = *report.max_gap;
    }
    if (report.suboptimality) {
        const auto& b = *report.suboptimality;
        nlohmann::ordered_json bj;
        bj["statistical_term"] = b.statistical_term;
        bj["discretization_term"] = b.discretization_term;
        bj["total"] = b.total;
        bj["optimal_bandwidth"] = b.optimal_bandwidth;
        bj["covering_number"] = b.covering_number;
        bj["formula"] = "2 L_g^(p/(p+2)) (p+2)/(4 p^p)^(1/(p+2)) (2 log(2N/delta)/(n c f))^(1/(p+2)) + 4 L_x tau";
        s["suboptimality_bound"] = bj;
    }
    if (config.kind == ExperimentKind::rate || config.kind == ExperimentKind::suboptimality) {
        s["covering_mode"] = std::string(to_string(config.covering.mode));
        s["covering_constant"] = config.covering.constant;
    }
    j["summary"] = s;

    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& pt : report.rate_points) {
        nlohmann::ordered_json pj;
        pj["n"] = pt.n;
        pj["bandwidth"] = pt.bandwidth;
        pj["mean_abs_error"] = pt.mean_abs_error;
        pj["empty_neighborhood_rate"] = pt.empty_neighborhood_rate;
        points.push_back(pj);
    }
    if (!points.empty()) {
        j["rate_points"] = points;
    }

    nlohmann::ordered_json asserts = nlohmann::ordered_json::array();
    for (const auto& a : report.assertions) {
        asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    }
    j["assertions"] = asserts;
    j["passed"] = report.passed();
    return j;
}

}  // namespace nwopt
