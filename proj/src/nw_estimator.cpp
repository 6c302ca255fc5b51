#include "nwopt/nw_estimator.hpp"

#include <cmath>
#include <string>

#include "nwopt/error.hpp"

namespace nwopt {
namespace {

void check_query(const Dataset& data, std::span<const double> gamma_query, double h)
{
    if (gamma_query.size() != data.covariate_dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "query has length " + std::to_string(gamma_query.size()) + ", dataset p=" +
                        std::to_string(data.covariate_dim()));
    }
    if (!(std::isfinite(h) && h > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "bandwidth must be positive and finite, got " + std::to_string(h));
    }
}

template <class Term>
Estimate neighbor_average(const NeighborSet& ball, Term&& term)
{
    Estimate out;
    out.neighbor_count = ball.count();
    out.empty_neighborhood = ball.empty();
    if (ball.empty()) {
        return out;
    }
    double sum = 0.0;
    for (std::size_t i : ball.indices) {
        sum += term(i);
    }
    out.value = sum / static_cast<double>(ball.count());
    return out;
}

}  // namespace

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

NeighborSet neighbors(const Dataset& data, std::span<const double> gamma_query, double h)
{
    check_query(data, gamma_query, h);
    NeighborSet ball;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (euclidean_distance(gamma_query, data.covariate(i)) <= h) {
            ball.indices.push_back(i);
        }
    }
    return ball;
}

Estimate nw_estimate(const Dataset& data, const LossModel& loss, std::span<const double> x,
                     const NeighborSet& ball)
{
    return neighbor_average(ball, [&](std::size_t i) { return loss(x, data.outcome(i)); });
}

Estimate nw_estimate(const Dataset& data, const LossModel& loss, std::span<const double> x,
                     std::span<const double> gamma_query, double h)
{
    return nw_estimate(data, loss, x, neighbors(data, gamma_query, h));
}

Estimate nw_conditional_mean_surrogate(const Dataset& data, const TrueConditionalOracle& oracle,
                                       std::span<const double> x, const NeighborSet& ball)
{
    return neighbor_average(
        ball, [&](std::size_t i) { return oracle.conditional_mean_loss(x, data.covariate(i)); });
}

Estimate nw_conditional_mean_surrogate(const Dataset& data, const TrueConditionalOracle& oracle,
                                       std::span<const double> x,
                                       std::span<const double> gamma_query, double h)
{
    return nw_conditional_mean_surrogate(data, oracle, x, neighbors(data, gamma_query, h));
}

}  // namespace nwopt
