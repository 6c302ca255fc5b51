#include "nwopt/stats.hpp"

#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "nwopt/error.hpp"

namespace nwopt::stats {

double clopper_pearson_upper(std::size_t k, std::size_t n, double confidence)
{
    if (n == 0 || k > n || !(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "clopper_pearson_upper: bad arguments");
    }
    if (k == n) {
        return 1.0;
    }
    // upper quantile of Beta(k + 1, n - k)
    return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k),
                                  confidence);
}

double clopper_pearson_lower(std::size_t k, std::size_t n, double confidence)
{
    if (n == 0 || k > n || !(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "clopper_pearson_lower: bad arguments");
    }
    if (k == 0) {
        return 0.0;
    }
    return boost::math::ibeta_inv(static_cast<double>(k), static_cast<double>(n - k + 1),
                                  1.0 - confidence);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "least_squares_slope needs >= 2 paired points");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "least_squares_slope: x values are all equal");
    }
    return sxy / sxx;
}

double mean(std::span<const double> values)
{
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace nwopt::stats
