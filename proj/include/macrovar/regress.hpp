#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace macrovar {

/// Regressor matrix with one name per column. Names default to x0, x1, ...
struct DesignMatrix {
    Eigen::MatrixXd x;
    std::vector<std::string> names;

    DesignMatrix() = default;
    explicit DesignMatrix(Eigen::MatrixXd m, std::vector<std::string> column_names = {});

    Eigen::Index rows() const noexcept { return x.rows(); }
    Eigen::Index cols() const noexcept { return x.cols(); }
};

struct RegressionResult {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd stderr_;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd coef_cov;
    double sigma2 = 0.0;  // rss / (n - k)
    double rss = 0.0;
    Eigen::Index nobs = 0;
    Eigen::Index df = 0;
    std::vector<std::string> names;
};

// Relative rank tolerance applied to |R_jj| against the largest column norm.
inline constexpr double kRankTolerance = 1e-10;

/// Least squares via Householder QR of X (normal equations are never formed).
/// A column whose R diagonal falls under kRankTolerance times the largest
/// column norm is reported as collinear with the columns before it.
RegressionResult ols(const DesignMatrix& X, const Eigen::VectorXd& y);

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
    double hq = 0.0;
};

/// Multivariate criteria from the MLE residual covariance (divisor nobs):
/// ln det(sigma) + penalty(n_params, nobs).
InformationCriteria information_criteria(const Eigen::MatrixXd& sigma_mle, Eigen::Index nobs,
                                         Eigen::Index n_params);

}  // namespace macrovar
