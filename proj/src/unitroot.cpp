#include "macrovar/unitroot.hpp"

#include "macrovar/error.hpp"
#include "macrovar/kernels.hpp"
#include "macrovar/regress.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <vector>

namespace macrovar {

double level_value(Level l) noexcept {
    switch (l) {
        case Level::p01: return 0.01;
        case Level::p05: return 0.05;
        case Level::p10: return 0.10;
    }
    return 0.0;
}

const char* level_label(Level l) noexcept {
    switch (l) {
        case Level::p01: return "1%";
        case Level::p05: return "5%";
        case Level::p10: return "10%";
    }
    return "";
}

const char* deterministic_name(Deterministic d) noexcept {
    switch (d) {
        case Deterministic::none: return "none";
        case Deterministic::constant: return "constant";
        case Deterministic::constant_trend: return "constant+trend";
    }
    return "";
}

namespace {

// tau critical values, N = 1 row of MacKinnon (2010) Table 1:
// cv(T) = b_inf + b1/T + b2/T^2 + b3/T^3, columns 1%, 5%, 10%.
constexpr double kAdfSurface[3][3][4] = {
    {{-2.56574, -2.2358, -3.627, 0.0}, {-1.94100, -0.2686, -3.365, 31.223}, {-1.61682, 0.2656, -2.714, 25.364}},
    {{-3.43035, -6.5393, -16.786, -79.433}, {-2.86154, -2.8903, -4.234, -40.040}, {-2.56677, -1.5384, -2.809, 0.0}},
    {{-3.95877, -9.0531, -28.428, -134.155},
     {-3.41049, -4.3904, -9.036, -45.374},
     {-3.12705, -2.5856, -3.925, -22.380}},
};

constexpr CriticalValues kKpssLevel{{0.739, 0.463, 0.347}};
constexpr CriticalValues kKpssTrend{{0.216, 0.146, 0.119}};

int det_terms(Deterministic d) {
    switch (d) {
        case Deterministic::none: return 0;
        case Deterministic::constant: return 1;
        case Deterministic::constant_trend: return 2;
    }
    return 0;
}

struct AdfFit {
    RegressionResult reg;
    Eigen::Index gamma_index = 0;
};

// Regression of dy_t on deterministic terms, y_{t-1} and p lagged differences
// over t = first..n-1 (indices into y).
AdfFit adf_regression(std::span<const double> y, Deterministic d, int p, std::size_t first) {
    const std::size_t n = y.size();
    const auto rows = static_cast<Eigen::Index>(n - first);
    const int nd = det_terms(d);
    const Eigen::Index cols = nd + 1 + p;
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd dy(rows);
    std::vector<std::string> names;
    if (nd >= 1) names.emplace_back("const");
    if (nd >= 2) names.emplace_back("trend");
    names.emplace_back("y(-1)");
    for (int i = 1; i <= p; ++i) names.push_back(fmt::format("dy(-{})", i));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = first + static_cast<std::size_t>(r);
        dy(r) = y[t] - y[t - 1];
        Eigen::Index c = 0;
        if (nd >= 1) x(r, c++) = 1.0;
        if (nd >= 2) x(r, c++) = static_cast<double>(t);
        x(r, c++) = y[t - 1];
        for (int i = 1; i <= p; ++i) x(r, c++) = y[t - static_cast<std::size_t>(i)] - y[t - static_cast<std::size_t>(i) - 1];
    }
    return {ols(DesignMatrix(std::move(x), std::move(names)), dy), nd};
}

}  // namespace

int default_adf_max_lags(std::size_t n) noexcept {
    return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

int default_kpss_bandwidth(std::size_t n) noexcept {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

CriticalValues adf_critical_values(Deterministic d, long nobs) {
    if (nobs <= 0) throw Error(Errc::insufficient_data, "adf critical values need a positive sample size");
    const auto& rows = kAdfSurface[det_terms(d)];
    const double inv = 1.0 / static_cast<double>(nobs);
    CriticalValues cv;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& b = rows[i];
        cv.values[i] = b[0] + inv * (b[1] + inv * (b[2] + inv * b[3]));
    }
    return cv;
}

CriticalValues kpss_critical_values(KpssNull null_type) noexcept {
    return null_type == KpssNull::level ? kKpssLevel : kKpssTrend;
}

std::optional<Level> adf_reject_level(double statistic, const CriticalValues& cv) noexcept {
    for (Level l : kLevels)
        if (statistic < cv.at(l)) return l;
    return std::nullopt;
}

std::optional<Level> kpss_reject_level(double statistic, const CriticalValues& cv) noexcept {
    for (Level l : kLevels)
        if (statistic > cv.at(l)) return l;
    return std::nullopt;
}

AdfResult adf_test(const TimeSeries& s, const AdfSpec& spec) {
    const auto y = s.values();
    const std::size_t n = y.size();
    const int max_lags = spec.max_lags < 0 ? default_adf_max_lags(n) : spec.max_lags;
    if (n < 15 + static_cast<std::size_t>(max_lags))
        throw Error(Errc::insufficient_data,
                    fmt::format("adf '{}': {} observations, need at least {} for max_lags={}", s.name(), n,
                                15 + max_lags, max_lags));
    if (kernels::sum_sq_dev(y, y[0]) == 0.0)
        throw Error(Errc::degenerate, fmt::format("adf '{}': series is constant", s.name()));

    int p = max_lags;
    if (spec.lag_selection != LagCriterion::fixed) {
        const std::size_t first = static_cast<std::size_t>(max_lags) + 1;
        double best = std::numeric_limits<double>::infinity();
        for (int cand = 0; cand <= max_lags; ++cand) {
            const AdfFit f = adf_regression(y, spec.deterministic, cand, first);
            const Eigen::MatrixXd sig = Eigen::MatrixXd::Constant(1, 1, f.reg.rss / static_cast<double>(f.reg.nobs));
            if (f.reg.rss <= 0.0) throw Error(Errc::degenerate, fmt::format("adf '{}': exact fit", s.name()));
            const auto ic = information_criteria(sig, f.reg.nobs, f.reg.coefficients.size());
            const double v = spec.lag_selection == LagCriterion::aic ? ic.aic : ic.bic;
            if (v < best) {
                best = v;
                p = cand;
            }
        }
    }

    const AdfFit f = adf_regression(y, spec.deterministic, p, static_cast<std::size_t>(p) + 1);
    AdfResult r;
    r.statistic = f.reg.coefficients(f.gamma_index) / f.reg.stderr_(f.gamma_index);
    r.lags_used = p;
    r.nobs = f.reg.nobs;
    r.deterministic = spec.deterministic;
    r.critical_values = adf_critical_values(spec.deterministic, r.nobs);
    r.reject_at = adf_reject_level(r.statistic, r.critical_values);
    return r;
}

double newey_west_lrv(std::span<const double> residuals, int bandwidth) {
    const std::size_t n = residuals.size();
    if (bandwidth < 0 || static_cast<std::size_t>(bandwidth) >= n)
        throw Error(Errc::config, fmt::format("newey_west_lrv: bandwidth {} must be in [0, {})", bandwidth, n));
    double mean = 0.0;
    for (double v : residuals) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> e(residuals.begin(), residuals.end());
    for (double& v : e) v -= mean;
    const double dn = static_cast<double>(n);
    double lrv = kernels::sum_sq_dev(e) / dn;
    for (int j = 1; j <= bandwidth; ++j) {
        const double w = 1.0 - static_cast<double>(j) / (bandwidth + 1.0);
        lrv += 2.0 * w * kernels::lagged_dot(e, static_cast<std::size_t>(j)) / dn;
    }
    return std::max(lrv, 0.0);
}

KpssResult kpss_test(const TimeSeries& s, const KpssSpec& spec) {
    const auto y = s.values();
    const std::size_t n = y.size();
    if (n < 15)
        throw Error(Errc::insufficient_data, fmt::format("kpss '{}': {} observations, need at least 15", s.name(), n));
    const int bw = spec.bandwidth < 0 ? default_kpss_bandwidth(n) : spec.bandwidth;
    if (static_cast<std::size_t>(bw) >= n)
        throw Error(Errc::config, fmt::format("kpss '{}': bandwidth {} not below length {}", s.name(), bw, n));

    // Residuals from the deterministic fit. Closed form for the level case.
    std::vector<double> e(y.begin(), y.end());
    if (spec.null_type == KpssNull::level) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : e) v -= mean;
    } else {
        Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 2);
        Eigen::VectorXd yy(static_cast<Eigen::Index>(n));
        for (std::size_t t = 0; t < n; ++t) {
            const auto r = static_cast<Eigen::Index>(t);
            x(r, 0) = 1.0;
            x(r, 1) = static_cast<double>(t + 1);
            yy(r) = y[t];
        }
        const auto reg = ols(DesignMatrix(std::move(x), {"const", "trend"}), yy);
        for (std::size_t t = 0; t < n; ++t) e[t] = reg.residuals(static_cast<Eigen::Index>(t));
    }

    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    const double ss = kernels::sum_sq_dev(e);
    if (ss <= 1e-24 * static_cast<double>(n) * (scale * scale + 1e-300))
        throw Error(Errc::degenerate, fmt::format("kpss '{}': residuals have zero variance", s.name()));

    const double lrv = newey_west_lrv(e, bw);
    if (!(lrv > 0.0)) throw Error(Errc::degenerate, fmt::format("kpss '{}': long-run variance is zero", s.name()));
    double partial = 0.0;
    double sum_sq = 0.0;
    for (double v : e) {
        partial += v;
        sum_sq += partial * partial;
    }
    KpssResult r;
    r.statistic = sum_sq / (static_cast<double>(n) * static_cast<double>(n) * lrv);
    r.bandwidth_used = bw;
    r.null_type = spec.null_type;
    r.critical_values = kpss_critical_values(spec.null_type);
    r.reject_at = kpss_reject_level(r.statistic, r.critical_values);
    return r;
}

StationarityVerdict classify(const AdfResult& adf, const KpssResult& kpss, Level level) noexcept {
    StationarityVerdict v;
    v.adf_stationary = adf.statistic < adf.critical_values.at(level);
    v.kpss_stationary = !(kpss.statistic > kpss.critical_values.at(level));
    return v;
}

}  // namespace macrovar
