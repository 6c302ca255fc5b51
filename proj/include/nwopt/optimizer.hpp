#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nwopt/core_types.hpp"

namespace nwopt {

inline constexpr std::size_t kDefaultMaxNetPoints = 10'000'000;

/// Axis-aligned grid over a box such that every box point is within tau of
/// a grid point. Points are stored row-major in lexicographic order (first
/// coordinate most significant).
struct TauNet {
    std::vector<double> coordinates;
    std::size_t dim = 0;
    double tau = 0.0;
    /// Largest per-axis gap allowed, 2 tau / sqrt(d); actual gaps are <= this.
    double spacing = 0.0;

    std::size_t size() const noexcept { return dim == 0 ? 0 : coordinates.size() / dim; }
    std::span<const double> point(std::size_t i) const
    {
        return {coordinates.data() + i * dim, dim};
    }
};

/// Each axis j gets ceil((upper_j - lower_j) / spacing) + 1 evenly spaced
/// points including both endpoints. Throws NetTooLarge above max_points.
TauNet build_tau_net(const FeasibleBox& box, double tau,
                     std::size_t max_points = kDefaultMaxNetPoints);

struct SolveOptions {
    std::size_t workers = 1;
    std::size_t max_net_points = kDefaultMaxNetPoints;
};

struct SolveResult {
    std::vector<double> x_hat;
    double objective_value = 0.0;
    bool empty_neighborhood = true;
    std::size_t net_size = 0;
    std::size_t net_index = 0;
    std::size_t neighbor_count = 0;
};

/// Minimizes the Nadaraya-Watson objective over a tau-net of the feasible
/// box. Ties go to the lexicographically smallest point; with an empty
/// neighborhood every objective is 0, so the first net point is returned.
SolveResult solve_nw(const Dataset& data, const ProblemSpec& problem,
                     std::span<const double> gamma_query, double h, double tau,
                     const SolveOptions& options = {});

/// Same, on a prebuilt net (reused across Monte Carlo trials).
SolveResult solve_nw(const Dataset& data, const ProblemSpec& problem,
                     std::span<const double> gamma_query, double h, const TauNet& net,
                     const SolveOptions& options = {});

}  // namespace nwopt
