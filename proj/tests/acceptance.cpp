// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nwopt/cli.hpp"
#include "nwopt/config.hpp"
#include "nwopt/io.hpp"
#include "nwopt/nw_estimator.hpp"
#include "nwopt/parallel.hpp"
#include "nwopt/problems.hpp"
#include "nwopt/random.hpp"
#include "nwopt/theory.hpp"
#include "reference_nw.hpp"

using namespace nwopt;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::string shipped(const std::string& name)
{
    return std::string(NWOPT_SOURCE_DIR) + "/configs/" + name;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr)
{
    args.insert(args.begin(), "nwopt");
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    if (out) *out = o.str();
    return code;
}

bool bitwise_equal(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

double two_term(double h, std::size_t n, std::size_t p, double lg, double f, double cover,
                double delta)
{
    return 2.0 * lg * h + 2.0 * std::sqrt(2.0 * std::log(2.0 * cover / delta) /
                                          (static_cast<double>(n) * ball_volume_constant(p) * f *
                                           std::pow(h, static_cast<double>(p))));
}

const Assertion* find_assertion(const ExperimentReport& report, const std::string& name)
{
    for (const auto& a : report.assertions) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

Verdict oracle_equivalence()
{
    const LossModel losses[] = {make_newsvendor_loss(1.0, 1.0, 1.0),
                                make_newsvendor_loss(3.0, 1.0, 1.0)};
    std::size_t boundary_cases = 0;
    for (std::uint64_t instance = 0; instance < 1000; ++instance) {
        CounterRng rng(derive_seed(1001, instance));
        const std::size_t p = 1 + rng.next() % 3;
        const std::size_t n = 1 + rng.next() % 20;
        std::vector<double> cov(n * p), out(n), query(p);
        for (auto& v : cov) v = rng.uniform();
        for (auto& v : out) v = rng.uniform();
        for (auto& v : query) v = rng.uniform();
        const Dataset data(cov, out, n, p, 1);
        const std::vector<double> x{rng.uniform()};
        double h = 0.02 + 0.8 * rng.uniform();
        if (instance % 4 == 0) {
            // put one sample exactly on the sphere
            const std::size_t j = rng.next() % n;
            double sq = 0.0;
            for (std::size_t k = 0; k < p; ++k) {
                const double d = cov[j * p + k] - query[k];
                sq += d * d;
            }
            h = std::sqrt(sq);
            if (h == 0.0) h = 0.1;
            ++boundary_cases;
        }
        const LossModel& loss = losses[instance % 2];
        const double got = nw_estimate(data, loss, x, query, h).value;
        const double want = nwopt::testing::reference_nw(data, loss, x, query, h);
        if (!bitwise_equal(got, want)) {
            return {false, fmt("instance %llu: %.17g vs %.17g", (unsigned long long)instance, got,
                               want)};
        }
    }
    return {true, fmt("1000/1000 instances bitwise equal (%zu with a sample on the sphere)",
                      boundary_cases)};
}

Verdict ball_constant()
{
    const double exact[] = {2.0, std::numbers::pi, 4.0 * std::numbers::pi / 3.0};
    double worst = 0.0;
    for (std::size_t p = 1; p <= 3; ++p) {
        worst = std::max(worst, std::abs(ball_volume_constant(p) - exact[p - 1]));
    }
    if (worst > 1e-12) return {false, fmt("closed form off by %.3g", worst)};

    constexpr std::size_t draws = 2'000'000;
    double worst_z = 0.0;
    for (std::size_t p = 1; p <= 4; ++p) {
        CounterRng rng(derive_seed(2002, p));
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
        const double se = cube * std::sqrt(frac * (1.0 - frac) / draws);
        const double z = std::abs(cube * frac - ball_volume_constant(p)) / se;
        worst_z = std::max(worst_z, z);
    }
    return {worst_z <= 3.0,
            fmt("closed form within %.2g; Monte Carlo worst |z| = %.3f over p = 1..4", worst,
                worst_z)};
}

Verdict bandwidth_optimality()
{
    double worst_h = 0.0;
    double worst_term = 0.0;
    for (std::uint64_t set = 0; set < 50; ++set) {
        CounterRng rng(derive_seed(3003, set));
        BoundParams::Fields f;
        f.covariate_dim = 1 + rng.next() % 5;
        f.decision_dim = 1 + rng.next() % 3;
        f.lipschitz_gamma = 0.1 + 1.9 * rng.uniform();
        f.lipschitz_x = 0.5 + rng.uniform();
        f.density_floor = 0.2 + 1.8 * rng.uniform();
        f.diameter = 0.5 + 2.0 * rng.uniform();
        f.delta = 0.01 + 0.4 * rng.uniform();
        f.tau = 0.01 + 0.2 * rng.uniform();
        const BoundParams params(f);
        const auto n = static_cast<std::size_t>(std::pow(10.0, 2.0 + 4.0 * rng.uniform()));
        const double cover = covering_number(f.diameter, f.tau, f.decision_dim, f.covering);

        const double h_star = optimal_bandwidth(n, params);
        double best_h = 0.0;
        double best_g = INFINITY;
        for (int k = 0; k < 2000; ++k) {
            const double h = std::pow(10.0, -4.0 + 5.0 * k / 1999.0);
            const double g = two_term(h, n, f.covariate_dim, f.lipschitz_gamma, f.density_floor,
                                      cover, f.delta);
            if (g < best_g) {
                best_g = g;
                best_h = h;
            }
        }
        worst_h = std::max(worst_h, std::abs(best_h - h_star) / h_star);
        const double stat = suboptimality_bound(n, params).statistical_term;
        const double g_star = two_term(h_star, n, f.covariate_dim, f.lipschitz_gamma,
                                       f.density_floor, cover, f.delta);
        worst_term = std::max(worst_term, std::abs(stat - g_star) / g_star);
    }
    return {worst_h <= 0.01 && worst_term <= 1e-10,
            fmt("50 sets: worst grid rel err %.3g (<= 0.01), worst statistical-term rel err %.3g "
                "(<= 1e-10)",
                worst_h, worst_term)};
}

Verdict scaling_law()
{
    double worst = 0.0;
    for (std::size_t p : {1u, 2u, 3u, 5u}) {
        const double expected = std::pow(2.0, -1.0 / static_cast<double>(p + 2));
        for (std::uint64_t set = 0; set < 20; ++set) {
            CounterRng rng(derive_seed(4004, p * 100 + set));
            BoundParams::Fields f;
            f.covariate_dim = p;
            f.lipschitz_gamma = 0.1 + 2.0 * rng.uniform();
            f.density_floor = 0.2 + 2.0 * rng.uniform();
            f.delta = 0.01 + 0.5 * rng.uniform();
            f.tau = 0.005 + 0.5 * rng.uniform();
            const BoundParams params(f);
            const auto n = static_cast<std::size_t>(std::pow(10.0, 1.0 + 6.0 * rng.uniform()));
            const double ratio = optimal_bandwidth(2 * n, params) / optimal_bandwidth(n, params);
            worst = std::max(worst, std::abs(ratio - expected) / expected);
        }
    }
    return {worst <= 1e-12, fmt("p in {1,2,3,5}, 80 sets: worst rel err %.3g (<= 1e-12)", worst)};
}

Verdict bias_bound()
{
    const auto config = load_experiment_config(shipped("bias_mad_p1.json"));
    const auto report = run_experiment(config, default_workers());
    const auto problem = config.problem.build();
    const double cap = problem.spec.loss().lipschitz_gamma() * config.bandwidth;
    std::size_t nonempty = 0;
    std::size_t violations = 0;
    double worst = -INFINITY;
    for (const auto& r : report.records) {
        if (r.empty_neighborhood) continue;
        ++nonempty;
        worst = std::max(worst, r.bias_component - cap);
        violations += r.bias_component > cap + 1e-12 ? 1 : 0;
    }
    return {nonempty >= 10'000 && violations == 0,
            fmt("%zu nonempty trials, %zu with |E-m| > L_gamma*h + 1e-12, max(|E-m| - L_gamma*h) "
                "= %.3g",
                nonempty, violations, worst)};
}

Verdict coverage()
{
    const auto config = load_experiment_config(shipped("coverage_p1.json"));
    const bool shape = config.kind == ExperimentKind::coverage && config.n == 2000 &&
                       config.bandwidth == 0.15 && config.epsilon == 0.3 &&
                       config.trials == 2000 && config.gamma_query.size() == 1;
    const auto report = run_experiment(config, default_workers());
    const auto* a = find_assertion(report, "violation_rate_within_bound");
    return {shape && a && a->passed,
            fmt("%s; %s", shape ? "config p=1 n=2000 h=0.15 eps=0.3 trials=2000" : "config mismatch",
                a ? a->detail.c_str() : "no assertion")};
}

Verdict rate()
{
    std::string detail;
    bool ok = true;
    for (const char* name : {"rate_p1.json", "rate_p2.json"}) {
        const auto config = load_experiment_config(shipped(name));
        const bool shape =
            config.n_grid == std::vector<std::size_t>{256, 512, 1024, 2048, 4096, 8192, 16384} &&
            config.trials_per_n == 200 && config.slope_window == 0.12;
        const auto report = run_experiment(config, default_workers());
        const auto* a = find_assertion(report, "rate_slope_in_window");
        ok = ok && shape && a && a->passed;
        detail += fmt("p=%zu %s%s; ", config.problem.generator.covariate_dim,
                      shape ? "" : "(config mismatch) ", a ? a->detail.c_str() : "no assertion");
    }
    return {ok, detail};
}

Verdict suboptimality()
{
    const auto config = load_experiment_config(shipped("suboptimality_p1.json"));
    const bool shape = config.kind == ExperimentKind::suboptimality && config.delta == 0.1 &&
                       config.tau == 0.02 && config.n == 4000 && config.trials == 500;
    const auto report = run_experiment(config, default_workers());
    const auto* a = find_assertion(report, "violation_rate_within_delta");
    std::size_t negative = 0;
    for (const auto& r : report.records) {
        negative += (r.gap && *r.gap < 0.0) ? 1 : 0;
    }
    return {shape && a && a->passed && negative == 0,
            fmt("%s%s; %zu trials with gap < 0; bound total %.6g",
                shape ? "" : "(config mismatch) ", a ? a->detail.c_str() : "no assertion",
                negative, report.suboptimality ? report.suboptimality->total : NAN)};
}

Verdict complexity()
{
    std::string out;
    if (run_cli({"complexity", "--epsilon", "0.2", "--delta", "0.05", "--p", "1"}, &out) != 0) {
        return {false, "complexity command failed"};
    }
    // Independent high-precision script: ceil(436499.74487446425...) = 436500.
    if (out.find("\nsamples 436500\n") == std::string::npos) {
        return {false, "worked example printed:\n" + out};
    }

    const double eps[] = {0.05, 0.1, 0.2, 0.3, 0.5};
    const double deltas[] = {0.01, 0.05, 0.1, 0.2, 0.4};
    const double floors[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    auto samples = [](double e, double d, double f) {
        std::string o;
        run_cli({"complexity", "--epsilon", io::format_real(e), "--delta", io::format_real(d),
                 "--density-floor", io::format_real(f)},
                &o);
        const auto pos = o.find("\nsamples ");
        return pos == std::string::npos ? 0ULL : std::stoull(o.substr(pos + 9));
    };
    unsigned long long grid[5][5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k) grid[i][j][k] = samples(eps[i], deltas[j], floors[k]);
    std::size_t breaks = 0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            for (int k = 0; k < 5; ++k) {
                if (grid[i][j][k] == 0) ++breaks;
                if (i > 0 && grid[i][j][k] > grid[i - 1][j][k]) ++breaks;
                if (j > 0 && grid[i][j][k] > grid[i][j - 1][k]) ++breaks;
                if (k > 0 && grid[i][j][k] > grid[i][j][k - 1]) ++breaks;
            }
        }
    }
    return {breaks == 0,
            fmt("worked example 436500; %zu monotonicity breaks over 5x5x5 (eps, delta, f)", breaks)};
}

Verdict determinism()
{
    const std::filesystem::path root = std::filesystem::path(NWOPT_TEST_TMP) / "acceptance_det";
    std::filesystem::remove_all(root);
    const char* names[] = {"coverage_p1", "bias_mad_p1", "rate_p1", "rate_p2", "suboptimality_p1",
                           "empty_neighborhood_p1"};
    std::size_t compared = 0;
    for (const char* name : names) {
        std::string reference_trials;
        std::string reference_report;
        for (const char* run : {"a1", "a8", "b1", "b8"}) {
            const std::string workers = run[1] == '1' ? "1" : "8";
            const auto dir = (root / run).string();
            const int code = run_cli({"experiment", shipped(std::string(name) + ".json"), "--out",
                                      dir, "--workers", workers});
            if (code != 0) return {false, fmt("%s exited %d", name, code)};
            const auto trials = slurp(dir + "/" + name + "_trials.csv");
            const auto report = slurp(dir + "/" + name + "_report.json");
            if (reference_trials.empty()) {
                reference_trials = trials;
                reference_report = report;
            } else if (trials != reference_trials || report != reference_report) {
                return {false, fmt("%s run %s differs", name, run)};
            }
            ++compared;
        }
    }
    return {true, fmt("%zu runs of 6 shipped configs (workers 1 and 8, twice each): byte-identical",
                      compared)};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        double budget_seconds;
        std::function<Verdict()> check;
    };
    const Criterion criteria[] = {
        {"estimator oracle equivalence", 5, oracle_equivalence},
        {"unit-ball constant", 10, ball_constant},
        {"bandwidth optimality", 10, bandwidth_optimality},
        {"bandwidth scaling law", 1, scaling_law},
        {"deterministic bias bound", 60, bias_bound},
        {"coverage", 120, coverage},
        {"convergence rate", 1200, rate},
        {"end-to-end suboptimality", 600, suboptimality},
        {"sample complexity", 5, complexity},
        {"determinism", 300, determinism},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds <= c.budget_seconds;
        const bool passed = v.passed && in_time;
        failures += passed ? 0 : 1;
        std::printf("%s [%d] %s: %s (%.2f s, budget %.0f s%s)\n", passed ? "PASS" : "FAIL", index,
                    c.name, v.detail.c_str(), seconds, c.budget_seconds,
                    in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
