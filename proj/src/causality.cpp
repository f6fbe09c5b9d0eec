#include "macrovar/causality.hpp"

#include "macrovar/error.hpp"
#include "macrovar/special.hpp"

#include <fmt/format.h>

namespace macrovar {

GrangerResult granger_wald(const VarModel& m, const std::string& cause, const std::string& effect) {
    if (cause == effect) throw Error(Errc::config, fmt::format("granger: cause and effect are both '{}'", cause));
    const Eigen::Index c = m.index_of(cause);
    const Eigen::Index e = m.index_of(effect);
    const RegressionResult& eq = m.equations[static_cast<std::size_t>(e)];

    const int q = m.p;
    Eigen::VectorXd r(q);
    Eigen::MatrixXd v(q, q);
    for (int i = 0; i < q; ++i) {
        const Eigen::Index ii = m.regressor_index(c, i + 1);
        r(i) = eq.coefficients(ii);
        for (int j = 0; j < q; ++j) v(i, j) = eq.coef_cov(ii, m.regressor_index(c, j + 1));
    }
    GrangerResult g;
    g.cause = cause;
    g.effect = effect;
    g.df = q;

    // An equation fitted exactly has no sampling noise: the null either holds
    // exactly (excluded block at zero) or the Wald form is undefined.
    const double yscale = 1.0 + m.data.col(e).cwiseAbs().maxCoeff();
    if (eq.rss <= 1e-20 * yscale * yscale * static_cast<double>(eq.nobs)) {
        const double scale = 1.0 + eq.coefficients.cwiseAbs().maxCoeff();
        if (r.cwiseAbs().maxCoeff() <= 1e-10 * scale) {
            g.chi2 = 0.0;
            g.pvalue = 1.0;
            return g;
        }
        throw Error(Errc::degenerate,
                    fmt::format("granger {} -> {}: equation fits exactly, Wald statistic undefined", cause, effect));
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(v);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 0.0).any())
        throw Error(Errc::degenerate,
                    fmt::format("granger {} -> {}: restricted coefficient covariance is singular", cause, effect));
    g.chi2 = std::max(0.0, r.dot(ldlt.solve(r)));
    g.pvalue = chi2_sf(g.chi2, q);
    return g;
}

std::vector<GrangerRow> granger_table(const Dataset& d, const VarSpec& spec, const std::vector<SampleRange>& samples,
                                      const std::string& shock, GrangerMode mode) {
    const Dataset ordered = spec.ordering.empty() ? d : d.reordered(spec.ordering);
    if (!ordered.index_of(shock)) throw Error(Errc::config, fmt::format("shock variable '{}' not in dataset", shock));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& v : ordered.variables())
        if (v.name() != shock) pairs.emplace_back(shock, v.name());
    for (const auto& v : ordered.variables())
        if (v.name() != shock) pairs.emplace_back(v.name(), shock);

    std::vector<GrangerRow> rows;
    for (const auto& s : samples) {
        std::optional<Dataset> sub;
        std::string sample_error;
        try {
            sub = subsample(ordered, s.from, s.to);
        } catch (const Error& ex) {
            sample_error = ex.what();
        }
        std::optional<VarModel> full;
        if (sub && mode == GrangerMode::conditional) {
            try {
                full = fit_var(*sub, {spec.lags, spec.include_constant, {}});
            } catch (const Error& ex) {
                sample_error = ex.what();
            }
        }
        for (const auto& [cause, effect] : pairs) {
            GrangerRow row{cause, effect, s.label, std::nullopt, sample_error};
            if (sample_error.empty()) {
                try {
                    if (mode == GrangerMode::conditional) {
                        row.result = granger_wald(*full, cause, effect);
                    } else {
                        const std::vector<TimeSeries> two{sub->at(cause), sub->at(effect)};
                        row.result = granger_wald(fit_var(Dataset(two), {spec.lags, spec.include_constant, {}}),
                                                  cause, effect);
                    }
                    row.result->sample_label = s.label;
                } catch (const Error& ex) {
                    row.error = ex.what();
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace macrovar
