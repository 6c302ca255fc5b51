#include "nwopt/optimizer.hpp"

#include <cmath>
#include <string>

#include "nwopt/error.hpp"
#include "nwopt/nw_estimator.hpp"
#include "nwopt/parallel.hpp"

namespace nwopt {

TauNet build_tau_net(const FeasibleBox& box, double tau, std::size_t max_points)
{
    if (!(std::isfinite(tau) && tau > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tau must be positive, got " + std::to_string(tau));
    }
    const std::size_t d = box.dim();
    TauNet net;
    net.dim = d;
    net.tau = tau;
    net.spacing = 2.0 * tau / std::sqrt(static_cast<double>(d));

    // A cell with sides <= spacing has half-diagonal <= spacing * sqrt(d) / 2 = tau.
    std::vector<std::vector<double>> axes(d);
    double total = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double lo = box.lower()[j];
        const double hi = box.upper()[j];
        const double segments = std::ceil((hi - lo) / net.spacing);
        total *= segments + 1.0;
        if (total > static_cast<double>(max_points)) {
            throw Error(ErrorCode::NetTooLarge,
                        "tau-net would exceed " + std::to_string(max_points) + " points");
        }
        const auto count = static_cast<std::size_t>(segments) + 1;
        auto& axis = axes[j];
        axis.resize(count);
        for (std::size_t k = 0; k < count; ++k) {
            axis[k] = lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(count - 1));
        }
        axis.back() = hi;
    }

    const auto size = static_cast<std::size_t>(total);
    net.coordinates.resize(size * d);
    std::vector<std::size_t> digit(d, 0);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            net.coordinates[i * d + j] = axes[j][digit[j]];
        }
        // odometer, last coordinate fastest
        for (std::size_t j = d; j-- > 0;) {
            if (++digit[j] < axes[j].size()) {
                break;
            }
            digit[j] = 0;
        }
    }
    return net;
}

SolveResult solve_nw(const Dataset& data, const ProblemSpec& problem,
                     std::span<const double> gamma_query, double h, const TauNet& net,
                     const SolveOptions& options)
{
    problem.check_dataset(data);
    if (net.dim != problem.decision_dim() || net.size() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "tau-net does not match the decision space");
    }
    const NeighborSet ball = neighbors(data, gamma_query, h);

    SolveResult out;
    out.net_size = net.size();
    out.neighbor_count = ball.count();
    out.empty_neighborhood = ball.empty();

    std::vector<double> objective(net.size(), 0.0);
    if (!ball.empty()) {
        parallel_for(net.size(), options.workers, [&](std::size_t i) {
            objective[i] = nw_estimate(data, problem.loss(), net.point(i), ball).value;
        });
    }

    // Net order is lexicographic, so the first strict minimum wins ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < objective.size(); ++i) {
        if (objective[i] < objective[best]) {
            best = i;
        }
    }
    out.net_index = best;
    out.objective_value = objective[best];
    const auto x = net.point(best);
    out.x_hat.assign(x.begin(), x.end());
    return out;
}

SolveResult solve_nw(const Dataset& data, const ProblemSpec& problem,
                     std::span<const double> gamma_query, double h, double tau,
                     const SolveOptions& options)
{
    const TauNet net = build_tau_net(problem.feasible(), tau, options.max_net_points);
    return solve_nw(data, problem, gamma_query, h, net, options);
}

}  // namespace nwopt
