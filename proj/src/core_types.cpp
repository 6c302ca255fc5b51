#include "nwopt/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nwopt/error.hpp"

namespace nwopt {
namespace {

bool all_finite(const std::vector<double>& values)
{
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_positive(double value, const char* what)
{
    if (!(std::isfinite(value) && value > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(what) + " must be positive and finite, got " +
                        std::to_string(value));
    }
}

}  // namespace

Dataset::Dataset(std::vector<double> covariates, std::vector<double> outcomes, std::size_t n,
                 std::size_t p, std::size_t q)
    : covariates_(std::move(covariates)), outcomes_(std::move(outcomes)), n_(n), p_(p), q_(q)
{
    if (n_ == 0 || p_ == 0 || q_ == 0) {
        throw Error(ErrorCode::DimensionMismatch, "dataset needs n, p, q >= 1");
    }
    if (covariates_.size() != n_ * p_ || outcomes_.size() != n_ * q_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "storage does not match n=" + std::to_string(n_) +
                        ", p=" + std::to_string(p_) + ", q=" + std::to_string(q_));
    }
    if (!all_finite(covariates_) || !all_finite(outcomes_)) {
        throw Error(ErrorCode::NonFiniteEntry, "dataset contains NaN or infinity");
    }
}

Dataset validate_dataset(const std::vector<std::vector<double>>& raw, std::size_t p,
                         std::size_t q)
{
    if (raw.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "dataset has no rows");
    }
    std::vector<double> covariates;
    std::vector<double> outcomes;
    covariates.reserve(raw.size() * p);
    outcomes.reserve(raw.size() * q);
    for (std::size_t r = 0; r < raw.size(); ++r) {
        const auto& row = raw[r];
        if (row.size() != p + q) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                            " columns, expected p+q=" + std::to_string(p + q));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) {
                throw Error(ErrorCode::NonFiniteEntry, "row " + std::to_string(r + 1) +
                                                           ", column " + std::to_string(c + 1));
            }
        }
        covariates.insert(covariates.end(), row.begin(), row.begin() + static_cast<long>(p));
        outcomes.insert(outcomes.end(), row.begin() + static_cast<long>(p), row.end());
    }
    return Dataset(std::move(covariates), std::move(outcomes), raw.size(), p, q);
}

LossModel::LossModel(std::string name, LossFunction evaluate, double lipschitz_x,
                     double lipschitz_gamma)
    : name_(std::move(name)),
      evaluate_(std::move(evaluate)),
      lipschitz_x_(lipschitz_x),
      lipschitz_gamma_(lipschitz_gamma)
{
    if (!evaluate_) {
        throw Error(ErrorCode::InvalidArgument, "loss model needs an evaluator");
    }
    require_positive(lipschitz_x_, "lipschitz_x");
    require_positive(lipschitz_gamma_, "lipschitz_gamma");
}

FeasibleBox::FeasibleBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)), diameter_(0.0)
{
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "box bounds must be non-empty and equal length");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) {
            throw Error(ErrorCode::NonFiniteEntry, "box bound " + std::to_string(j));
        }
        if (!(lower_[j] < upper_[j])) {
            throw Error(ErrorCode::InvalidArgument,
                        "box needs lower < upper in coordinate " + std::to_string(j));
        }
        const double side = upper_[j] - lower_[j];
        sum += side * side;
    }
    diameter_ = std::sqrt(sum);
    if (!std::isfinite(diameter_)) {
        throw Error(ErrorCode::NonFiniteEntry, "box diameter overflows");
    }
}

bool FeasibleBox::contains(std::span<const double> x) const noexcept
{
    if (x.size() != lower_.size()) {
        return false;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= lower_[j] && x[j] <= upper_[j])) {
            return false;
        }
    }
    return true;
}

ProblemSpec::ProblemSpec(LossModel loss, FeasibleBox feasible, double density_floor,
                         std::size_t covariate_dim, std::size_t outcome_dim)
    : loss_(std::move(loss)),
      feasible_(std::move(feasible)),
      density_floor_(density_floor),
      covariate_dim_(covariate_dim),
      outcome_dim_(outcome_dim)
{
    require_positive(density_floor_, "density_floor");
    if (covariate_dim_ == 0 || outcome_dim_ == 0) {
        throw Error(ErrorCode::DimensionMismatch, "covariate and outcome dims must be >= 1");
    }
}

void ProblemSpec::check_dataset(const Dataset& data) const
{
    if (data.covariate_dim() != covariate_dim_ || data.outcome_dim() != outcome_dim_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "dataset has p=" + std::to_string(data.covariate_dim()) +
                        ", q=" + std::to_string(data.outcome_dim()) + " but problem expects p=" +
                        std::to_string(covariate_dim_) + ", q=" + std::to_string(outcome_dim_));
    }
}

std::string_view to_string(CoveringMode mode) noexcept
{
    return mode == CoveringMode::ball ? "ball" : "scaled";
}

CoveringMode covering_mode_from_string(std::string_view text)
{
    if (text == "ball") {
        return CoveringMode::ball;
    }
    if (text == "scaled") {
        return CoveringMode::scaled;
    }
    throw Error(ErrorCode::InvalidArgument,
                "covering mode must be 'ball' or 'scaled', got '" + std::string(text) + "'");
}

BoundParams::BoundParams(const Fields& fields) : f_(fields)
{
    if (!(f_.delta > 0.0 && f_.delta < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "delta must lie in (0,1), got " + std::to_string(f_.delta));
    }
    require_positive(f_.tau, "tau");
    require_positive(f_.lipschitz_x, "lipschitz_x");
    require_positive(f_.lipschitz_gamma, "lipschitz_gamma");
    require_positive(f_.density_floor, "density_floor");
    require_positive(f_.diameter, "diameter");
    if (f_.decision_dim == 0 || f_.covariate_dim == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimensions must be >= 1");
    }
    if (!(std::isfinite(f_.covering.constant) && f_.covering.constant >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "covering_constant must be >= 1");
    }
}

BoundParams BoundParams::for_problem(const ProblemSpec& problem, double delta, double tau,
                                     Covering covering)
{
    Fields f;
    f.delta = delta;
    f.tau = tau;
    f.lipschitz_x = problem.loss().lipschitz_x();
    f.lipschitz_gamma = problem.loss().lipschitz_gamma();
    f.density_floor = problem.density_floor();
    f.diameter = problem.feasible().diameter();
    f.decision_dim = problem.decision_dim();
    f.covariate_dim = problem.covariate_dim();
    f.covering = covering;
    return BoundParams(f);
}

}  // namespace nwopt
