#include "macrovar/var.hpp"

#include "macrovar/error.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <limits>

namespace macrovar {

Eigen::Index VarModel::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<Eigen::Index>(i);
    throw Error(Errc::config, fmt::format("variable '{}' is not in the model", name));
}

Eigen::MatrixXd VarModel::fitted() const {
    return data.bottomRows(nobs) - residuals;
}

bool var_sample_sufficient(Eigen::Index T, int k, int p) noexcept {
    return T - p > 0 && T > static_cast<Eigen::Index>(k) * p + 1 + 10;
}

VarModel fit_var_matrix(const Eigen::MatrixXd& y, std::vector<std::string> names, int p, bool include_constant,
                        Eigen::Index skip) {
    const Eigen::Index T = y.rows();
    const auto k = static_cast<int>(y.cols());
    if (p < 1) throw Error(Errc::config, fmt::format("VAR lag order must be >= 1, got {}", p));
    if (static_cast<int>(names.size()) != k) throw Error(Errc::config, "VAR: one name per column required");
    if (!var_sample_sufficient(T - skip, k, p))
        throw Error(Errc::insufficient_data,
                    fmt::format("VAR({}) with {} variables needs more than {} observations, have {}", p, k,
                                static_cast<long>(k) * p + 11, T - skip));

    const Eigen::Index first = p + skip;
    const Eigen::Index n = T - first;
    const Eigen::Index c0 = include_constant ? 1 : 0;
    Eigen::MatrixXd x(n, c0 + static_cast<Eigen::Index>(k) * p);
    std::vector<std::string> cols;
    if (include_constant) {
        x.col(0).setOnes();
        cols.emplace_back("const");
    }
    for (int lag = 1; lag <= p; ++lag) {
        x.middleCols(c0 + static_cast<Eigen::Index>(lag - 1) * k, k) = y.middleRows(first - lag, n);
        for (const auto& nm : names) cols.push_back(fmt::format("{}(-{})", nm, lag));
    }
    const DesignMatrix design(std::move(x), std::move(cols));

    VarModel m;
    m.k = k;
    m.p = p;
    m.has_constant = include_constant;
    m.names = std::move(names);
    m.intercept = Eigen::VectorXd::Zero(k);
    m.coef.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(k, k));
    m.residuals.resize(n, k);
    m.nobs = n;
    m.data = y.bottomRows(T - skip);
    m.equations.reserve(static_cast<std::size_t>(k));
    for (int eq = 0; eq < k; ++eq) {
        RegressionResult r = ols(design, y.col(eq).tail(n));
        if (include_constant) m.intercept(eq) = r.coefficients(0);
        for (int lag = 1; lag <= p; ++lag)
            m.coef[static_cast<std::size_t>(lag - 1)].row(eq) =
                r.coefficients.segment(c0 + static_cast<Eigen::Index>(lag - 1) * k, k).transpose();
        m.residuals.col(eq) = r.residuals;
        m.equations.push_back(std::move(r));
    }
    m.sigma = (m.residuals.transpose() * m.residuals) / static_cast<double>(n);
    m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();
    return m;
}

VarModel fit_var(const Dataset& d, const VarSpec& spec) {
    const Dataset ordered = spec.ordering.empty() ? d : d.reordered(spec.ordering);
    return fit_var_matrix(ordered.matrix(), ordered.names(), spec.lags, spec.include_constant);
}

LagSelection select_lag(const Dataset& d, int p_max, bool include_constant) {
    if (p_max < 1) throw Error(Errc::config, fmt::format("select_lag: p_max must be >= 1, got {}", p_max));
    const Eigen::MatrixXd y = d.matrix();
    const auto k = static_cast<int>(d.num_vars());
    if (!var_sample_sufficient(y.rows(), k, p_max))
        throw Error(Errc::insufficient_data,
                    fmt::format("select_lag: {} observations are too few for p_max={} with {} variables", y.rows(),
                                p_max, k));
    LagSelection out;
    double best[3] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    for (int p = 1; p <= p_max; ++p) {
        const VarModel m = fit_var_matrix(y, d.names(), p, include_constant, p_max - p);
        LagRow row{p, information_criteria(m.sigma, m.nobs, m.n_params())};
        const double vals[3] = {row.ic.aic, row.ic.bic, row.ic.hq};
        int* slots[3] = {&out.best_aic, &out.best_bic, &out.best_hq};
        for (int c = 0; c < 3; ++c) {
            if (vals[c] < best[c]) {
                best[c] = vals[c];
                *slots[c] = p;
            }
        }
        out.rows.push_back(row);
    }
    return out;
}

Eigen::MatrixXd companion_matrix(const VarModel& m) {
    const Eigen::Index k = m.k;
    const Eigen::Index kp = k * m.p;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kp, kp);
    for (int i = 0; i < m.p; ++i) c.block(0, static_cast<Eigen::Index>(i) * k, k, k) = m.coef[static_cast<std::size_t>(i)];
    if (m.p > 1) c.bottomLeftCorner(kp - k, kp - k).setIdentity();
    return c;
}

Stability stability(const VarModel& m) {
    const Eigen::MatrixXd c = companion_matrix(m);
    const Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    double mod = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mod = std::max(mod, std::abs(es.eigenvalues()(i)));
    return {mod, mod < 1.0 - 1e-10};
}

Eigen::MatrixXd simulate_var(const VarModel& m, const Eigen::MatrixXd& initial, const Eigen::MatrixXd& innovations) {
    const Eigen::Index p = m.p;
    const Eigen::Index T = p + innovations.rows();
    Eigen::MatrixXd y(T, m.k);
    y.topRows(p) = initial.topRows(p);
    for (Eigen::Index t = p; t < T; ++t) {
        Eigen::VectorXd v = m.intercept + innovations.row(t - p).transpose();
        for (Eigen::Index i = 1; i <= p; ++i) v.noalias() += m.coef[static_cast<std::size_t>(i - 1)] * y.row(t - i).transpose();
        y.row(t) = v.transpose();
    }
    return y;
}

}  // namespace macrovar
