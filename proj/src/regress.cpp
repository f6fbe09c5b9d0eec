#include "macrovar/regress.hpp"

#include "macrovar/error.hpp"
#include "macrovar/kernels.hpp"

#include <fmt/format.h>

#include <cmath>
#include <span>

namespace macrovar {

DesignMatrix::DesignMatrix(Eigen::MatrixXd m, std::vector<std::string> column_names)
    : x(std::move(m)), names(std::move(column_names)) {
    if (names.empty()) {
        names.reserve(static_cast<std::size_t>(x.cols()));
        for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back(fmt::format("x{}", j));
    }
    if (static_cast<Eigen::Index>(names.size()) != x.cols())
        throw Error(Errc::config, fmt::format("design matrix has {} columns but {} names", x.cols(), names.size()));
}

namespace {

std::span<double> col(Eigen::MatrixXd& m, Eigen::Index j, Eigen::Index from) {
    return {m.col(j).data() + from, static_cast<std::size_t>(m.rows() - from)};
}

std::span<const double> ccol(const Eigen::MatrixXd& m, Eigen::Index j, Eigen::Index from) {
    return {m.col(j).data() + from, static_cast<std::size_t>(m.rows() - from)};
}

struct HouseholderQr {
    Eigen::MatrixXd qr;       // R above the diagonal, reflectors below (scaled so v[0] = 1)
    Eigen::VectorXd tau;      // reflector coefficients
    Eigen::VectorXd rdiag;
};

// In-place Householder QR. Returns the index of the first column whose
// diagonal falls below `tol`, or -1 when X has full column rank.
Eigen::Index householder(HouseholderQr& f, double tol) {
    auto& a = f.qr;
    const Eigen::Index n = a.rows();
    const Eigen::Index k = a.cols();
    f.tau.setZero(k);
    f.rdiag.setZero(k);
    Eigen::VectorXd v(n);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto x = ccol(a, j, j);
        const double norm = std::sqrt(kernels::dot(x, x));
        if (norm <= tol) {
            f.rdiag(j) = norm;
            return j;
        }
        const double alpha = x[0] > 0 ? -norm : norm;
        // v = x - alpha e1, normalized so v[0] = 1
        const double v0 = x[0] - alpha;
        const Eigen::Index m = n - j;
        v.head(m) = a.col(j).segment(j, m) / v0;
        v(0) = 1.0;
        const std::span<const double> vs{v.data(), static_cast<std::size_t>(m)};
        const double vtv = kernels::dot(vs, vs);
        const double tau = 2.0 / vtv;
        for (Eigen::Index c = j + 1; c < k; ++c) {
            const double w = kernels::dot(vs, ccol(a, c, j));
            kernels::axpy(-tau * w, vs, col(a, c, j));
        }
        a(j, j) = alpha;
        a.col(j).segment(j + 1, m - 1) = v.segment(1, m - 1);
        f.tau(j) = tau;
        f.rdiag(j) = alpha;
        if (std::abs(alpha) <= tol) return j;
    }
    return -1;
}

// y <- Q^T y
void apply_qt(const HouseholderQr& f, Eigen::VectorXd& y) {
    const Eigen::Index n = f.qr.rows();
    Eigen::VectorXd v(n);
    for (Eigen::Index j = 0; j < f.qr.cols(); ++j) {
        const Eigen::Index m = n - j;
        v(0) = 1.0;
        v.segment(1, m - 1) = f.qr.col(j).segment(j + 1, m - 1);
        const std::span<const double> vs{v.data(), static_cast<std::size_t>(m)};
        const std::span<double> ys{y.data() + j, static_cast<std::size_t>(m)};
        const double w = kernels::dot(vs, ys);
        kernels::axpy(-f.tau(j) * w, vs, ys);
    }
}

}  // namespace

RegressionResult ols(const DesignMatrix& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != n)
        throw Error(Errc::config, fmt::format("ols: {} observations but y has length {}", n, y.size()));
    if (k == 0) throw Error(Errc::config, "ols: design matrix has no columns");
    if (n <= k)
        throw Error(Errc::insufficient_data, fmt::format("ols: need more observations ({}) than regressors ({})", n, k));

    double max_norm = 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
        max_norm = std::max(max_norm, std::sqrt(kernels::sum_sq_dev(ccol(X.x, j, 0))));
    const double tol = kRankTolerance * max_norm;

    HouseholderQr f{X.x, {}, {}};
    if (max_norm == 0.0) throw Error(Errc::collinear, "ols: all regressor columns are zero");
    if (const Eigen::Index bad = householder(f, tol); bad >= 0) {
        std::string earlier;
        for (Eigen::Index j = 0; j < bad; ++j)
            earlier += fmt::format("{}{}", j ? ", " : "", X.names[static_cast<std::size_t>(j)]);
        throw Error(Errc::collinear,
                    fmt::format("ols: column '{}' is linearly dependent on [{}]", X.names[static_cast<std::size_t>(bad)],
                                earlier));
    }

    Eigen::VectorXd qty = y;
    apply_qt(f, qty);
    const auto R = f.qr.topLeftCorner(k, k).triangularView<Eigen::Upper>();

    RegressionResult r;
    r.coefficients = R.solve(qty.head(k));
    r.residuals = y - X.x * r.coefficients;
    r.rss = kernels::sum_sq_dev({r.residuals.data(), static_cast<std::size_t>(n)});
    r.nobs = n;
    r.df = n - k;
    r.sigma2 = r.rss / static_cast<double>(r.df);
    // (X'X)^-1 = R^-1 R^-T
    const Eigen::MatrixXd rinv = R.solve(Eigen::MatrixXd::Identity(k, k));
    r.coef_cov = r.sigma2 * (rinv * rinv.transpose());
    r.coef_cov = 0.5 * (r.coef_cov + r.coef_cov.transpose()).eval();
    r.stderr_ = r.coef_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    r.names = X.names;
    return r;
}

InformationCriteria information_criteria(const Eigen::MatrixXd& sigma_mle, Eigen::Index nobs, Eigen::Index n_params) {
    if (sigma_mle.rows() == 0 || sigma_mle.rows() != sigma_mle.cols())
        throw Error(Errc::degenerate, "information_criteria: covariance must be square and non-empty");
    if (nobs < 3 || n_params < 0)
        throw Error(Errc::insufficient_data,
                    fmt::format("information_criteria: {} observations, {} parameters", nobs, n_params));
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma_mle);
    if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().array() <= 0.0).any())
        throw Error(Errc::degenerate, "information_criteria: residual covariance is not positive definite");
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double t = static_cast<double>(nobs);
    const double m = static_cast<double>(n_params);
    return {logdet + 2.0 * m / t, logdet + m * std::log(t) / t, logdet + 2.0 * m * std::log(std::log(t)) / t};
}

}  // namespace macrovar
