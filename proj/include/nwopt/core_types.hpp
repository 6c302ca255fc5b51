#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nwopt {

/// n paired observations (covariate in R^p, outcome in R^q), stored row-major.
class Dataset {
public:
    Dataset(std::vector<double> covariates, std::vector<double> outcomes, std::size_t n,
            std::size_t p, std::size_t q);

    std::size_t size() const noexcept { return n_; }
    std::size_t covariate_dim() const noexcept { return p_; }
    std::size_t outcome_dim() const noexcept { return q_; }

    std::span<const double> covariate(std::size_t i) const
    {
        return {covariates_.data() + i * p_, p_};
    }
    std::span<const double> outcome(std::size_t i) const
    {
        return {outcomes_.data() + i * q_, q_};
    }

    const std::vector<double>& covariates() const noexcept { return covariates_; }
    const std::vector<double>& outcomes() const noexcept { return outcomes_; }

private:
    std::vector<double> covariates_;
    std::vector<double> outcomes_;
    std::size_t n_;
    std::size_t p_;
    std::size_t q_;
};

/// Splits each row of `raw` into its first p (covariate) and last q (outcome)
/// columns. Throws DimensionMismatch or NonFiniteEntry.
Dataset validate_dataset(const std::vector<std::vector<double>>& raw, std::size_t p,
                         std::size_t q);

using LossFunction =
    std::function<double(std::span<const double> x, std::span<const double> xi)>;

/// A loss l(x, xi) with values in [0,1] together with its declared Lipschitz
/// constants: in x for the loss itself, and in the covariate for the
/// conditional expectation. The [0,1] range is a contract checked by tests,
/// not on every call.
class LossModel {
public:
    LossModel(std::string name, LossFunction evaluate, double lipschitz_x,
              double lipschitz_gamma);

    double operator()(std::span<const double> x, std::span<const double> xi) const
    {
        return evaluate_(x, xi);
    }

    const std::string& name() const noexcept { return name_; }
    double lipschitz_x() const noexcept { return lipschitz_x_; }
    double lipschitz_gamma() const noexcept { return lipschitz_gamma_; }

private:
    std::string name_;
    LossFunction evaluate_;
    double lipschitz_x_;
    double lipschitz_gamma_;
};

/// Axis-aligned feasible set {x : lower <= x <= upper}.
class FeasibleBox {
public:
    FeasibleBox(std::vector<double> lower, std::vector<double> upper);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }

    /// Euclidean length of the main diagonal.
    double diameter() const noexcept { return diameter_; }

    bool contains(std::span<const double> x) const noexcept;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    double diameter_;
};

class ProblemSpec {
public:
    ProblemSpec(LossModel loss, FeasibleBox feasible, double density_floor,
                std::size_t covariate_dim, std::size_t outcome_dim);

    const LossModel& loss() const noexcept { return loss_; }
    const FeasibleBox& feasible() const noexcept { return feasible_; }
    double density_floor() const noexcept { return density_floor_; }
    std::size_t covariate_dim() const noexcept { return covariate_dim_; }
    std::size_t outcome_dim() const noexcept { return outcome_dim_; }
    std::size_t decision_dim() const noexcept { return feasible_.dim(); }

    /// Throws DimensionMismatch if the dataset's p or q disagree.
    void check_dataset(const Dataset& data) const;

private:
    LossModel loss_;
    FeasibleBox feasible_;
    double density_floor_;
    std::size_t covariate_dim_;
    std::size_t outcome_dim_;
};

enum class CoveringMode {
    ball,    ///< (1 + 2D/tau)^d, or 1 when tau >= D
    scaled,  ///< constant * max(1, D/tau)^d
};

std::string_view to_string(CoveringMode mode) noexcept;
CoveringMode covering_mode_from_string(std::string_view text);

struct Covering {
    CoveringMode mode = CoveringMode::ball;
    double constant = 1.0;
};

/// Everything the bandwidth / suboptimality / sample-complexity formulas
/// consume besides n.
class BoundParams {
public:
    struct Fields {
        double delta = 0.1;
        double tau = 0.02;
        double lipschitz_x = 1.0;
        double lipschitz_gamma = 1.0;
        double density_floor = 1.0;
        double diameter = 1.0;
        std::size_t decision_dim = 1;
        std::size_t covariate_dim = 1;
        Covering covering{};
    };

    explicit BoundParams(const Fields& fields);

    static BoundParams for_problem(const ProblemSpec& problem, double delta, double tau,
                                   Covering covering = {});

    double delta() const noexcept { return f_.delta; }
    double tau() const noexcept { return f_.tau; }
    double lipschitz_x() const noexcept { return f_.lipschitz_x; }
    double lipschitz_gamma() const noexcept { return f_.lipschitz_gamma; }
    double density_floor() const noexcept { return f_.density_floor; }
    double diameter() const noexcept { return f_.diameter; }
    std::size_t decision_dim() const noexcept { return f_.decision_dim; }
    std::size_t covariate_dim() const noexcept { return f_.covariate_dim; }
    const Covering& covering() const noexcept { return f_.covering; }
    const Fields& fields() const noexcept { return f_; }

private:
    Fields f_;
};

}  // namespace nwopt
