#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nwopt/core_types.hpp"
#include "nwopt/problems.hpp"

namespace nwopt {

/// Rows whose covariate lies in the closed ball of radius h around the query.
struct NeighborSet {
    std::vector<std::size_t> indices;

    std::size_t count() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }
};

/// Euclidean distance, accumulated in coordinate order.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Exact linear scan; points at distance exactly h are members.
NeighborSet neighbors(const Dataset& data, std::span<const double> gamma_query, double h);

struct Estimate {
    double value = 0.0;
    std::size_t neighbor_count = 0;
    /// Set when no sample falls in the ball; value is then 0 by definition,
    /// which is not the same as an estimated expected loss of 0.
    bool empty_neighborhood = true;
};

/// Spherical-kernel Nadaraya-Watson estimate of E[l(x, xi) | gamma_query]:
/// the plain average of l(x, xi^i) over the neighbor set, or 0 when empty.
Estimate nw_estimate(const Dataset& data, const LossModel& loss, std::span<const double> x,
                     std::span<const double> gamma_query, double h);

/// Same estimate for a precomputed neighbor set.
Estimate nw_estimate(const Dataset& data, const LossModel& loss, std::span<const double> x,
                     const NeighborSet& ball);

/// The estimator's mean given the covariate sample: the neighbor average of
/// the true conditional expected loss at each sampled covariate.
Estimate nw_conditional_mean_surrogate(const Dataset& data, const TrueConditionalOracle& oracle,
                                       std::span<const double> x,
                                       std::span<const double> gamma_query, double h);

Estimate nw_conditional_mean_surrogate(const Dataset& data, const TrueConditionalOracle& oracle,
                                       std::span<const double> x, const NeighborSet& ball);

}  // namespace nwopt
