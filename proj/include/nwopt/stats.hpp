#pragma once

#include <cstddef>
#include <span>

namespace nwopt::stats {

/// One-sided Clopper-Pearson upper confidence bound on a binomial rate
/// after k successes in n trials.
double clopper_pearson_upper(std::size_t k, std::size_t n, double confidence);

/// One-sided Clopper-Pearson lower confidence bound.
double clopper_pearson_lower(std::size_t k, std::size_t n, double confidence);

/// Ordinary least-squares slope of y on x. Needs at least two distinct x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> values);

}  // namespace nwopt::stats
