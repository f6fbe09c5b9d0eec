#pragma once

#include "macrovar/regress.hpp"
#include "macrovar/timeseries.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace macrovar {

struct VarSpec {
    int lags = 1;
    bool include_constant = true;
    // Identification order; empty keeps the dataset order.
    std::vector<std::string> ordering;
};

struct VarModel {
    int k = 0;
    int p = 0;
    bool has_constant = true;
    std::vector<std::string> names;       // identification order
    Eigen::VectorXd intercept;            // zero when has_constant is false
    std::vector<Eigen::MatrixXd> coef;    // A_1..A_p, each k x k, row = equation
    Eigen::MatrixXd residuals;            // nobs x k
    Eigen::MatrixXd sigma;                // E'E / nobs
    Eigen::Index nobs = 0;
    std::vector<RegressionResult> equations;  // per equation, regressors [const], y(-1)..y(-p)
    Eigen::MatrixXd data;                 // T x k sample used for the fit, identification order

    Eigen::Index index_of(const std::string& name) const;
    // Column of `var` at lag `lag` (1-based) in each equation's regressor vector.
    Eigen::Index regressor_index(Eigen::Index var, int lag) const noexcept {
        return (has_constant ? 1 : 0) + static_cast<Eigen::Index>(lag - 1) * k + var;
    }
    Eigen::Index n_params() const noexcept {
        return static_cast<Eigen::Index>(k) * (static_cast<Eigen::Index>(k) * p + (has_constant ? 1 : 0));
    }
    // One-step fitted values, nobs x k.
    Eigen::MatrixXd fitted() const;
};

// Effective-sample requirement: T > k*p + 1 + 10.
bool var_sample_sufficient(Eigen::Index T, int k, int p) noexcept;

VarModel fit_var(const Dataset& d, const VarSpec& spec);

/// Fit on a T x k matrix, dropping the first `skip` rows beyond the p presample
/// rows (so candidates in lag selection share an estimation sample).
VarModel fit_var_matrix(const Eigen::MatrixXd& y, std::vector<std::string> names, int p, bool include_constant,
                        Eigen::Index skip = 0);

struct LagRow {
    int p = 0;
    InformationCriteria ic;
};

struct LagSelection {
    std::vector<LagRow> rows;
    int best_aic = 0;
    int best_bic = 0;
    int best_hq = 0;
};

/// Candidates 1..p_max on the common sample starting at t = p_max + 1.
LagSelection select_lag(const Dataset& d, int p_max, bool include_constant = true);

struct Stability {
    double max_modulus = 0.0;
    bool stable = false;
};

Eigen::MatrixXd companion_matrix(const VarModel& m);
Stability stability(const VarModel& m);

/// Regenerate T rows from the first p rows of `initial`, the model's intercept
/// and lag matrices, and innovations (T - p rows).
Eigen::MatrixXd simulate_var(const VarModel& m, const Eigen::MatrixXd& initial, const Eigen::MatrixXd& innovations);

}  // namespace macrovar
