#pragma once

#include "macrovar/timeseries.hpp"

#include <array>
#include <optional>
#include <span>

namespace macrovar {

enum class Level { p01, p05, p10 };

inline constexpr std::array<Level, 3> kLevels{Level::p01, Level::p05, Level::p10};

double level_value(Level l) noexcept;  // 0.01, 0.05, 0.10
const char* level_label(Level l) noexcept;  // "1%", ...

/// Thresholds indexed by kLevels order.
struct CriticalValues {
    std::array<double, 3> values{};
    double at(Level l) const noexcept { return values[static_cast<std::size_t>(l)]; }
};

enum class Deterministic { none, constant, constant_trend };
enum class LagCriterion { fixed, aic, bic };

const char* deterministic_name(Deterministic d) noexcept;

struct AdfSpec {
    Deterministic deterministic = Deterministic::constant;
    // Negative means floor(12 * (n/100)^(1/4)).
    int max_lags = -1;
    LagCriterion lag_selection = LagCriterion::bic;
};

struct AdfResult {
    double statistic = 0.0;
    int lags_used = 0;
    long nobs = 0;
    Deterministic deterministic = Deterministic::constant;
    CriticalValues critical_values;
    std::optional<Level> reject_at;  // strictest level at which the unit root is rejected
};

int default_adf_max_lags(std::size_t n) noexcept;

/// MacKinnon (2010) response surface, one regressor, evaluated at `nobs`.
CriticalValues adf_critical_values(Deterministic d, long nobs);

AdfResult adf_test(const TimeSeries& s, const AdfSpec& spec = {});

enum class KpssNull { level, trend };

struct KpssSpec {
    KpssNull null_type = KpssNull::level;
    // Negative means floor(4 * (n/100)^(1/4)).
    int bandwidth = -1;
};

struct KpssResult {
    double statistic = 0.0;
    int bandwidth_used = 0;
    KpssNull null_type = KpssNull::level;
    CriticalValues critical_values;
    std::optional<Level> reject_at;  // strictest level at which stationarity is rejected
};

int default_kpss_bandwidth(std::size_t n) noexcept;

/// Kwiatkowski et al. (1992) asymptotic table.
CriticalValues kpss_critical_values(KpssNull null_type) noexcept;

KpssResult kpss_test(const TimeSeries& s, const KpssSpec& spec = {});

/// Bartlett-kernel long-run variance of the demeaned input, divisor n.
double newey_west_lrv(std::span<const double> residuals, int bandwidth);

// Pure functions of (statistic, critical values).
std::optional<Level> adf_reject_level(double statistic, const CriticalValues& cv) noexcept;
std::optional<Level> kpss_reject_level(double statistic, const CriticalValues& cv) noexcept;

struct StationarityVerdict {
    bool adf_stationary = false;   // unit root rejected at `level`
    bool kpss_stationary = false;  // stationarity not rejected at `level`
    bool confirmed() const noexcept { return adf_stationary && kpss_stationary; }
};

StationarityVerdict classify(const AdfResult& adf, const KpssResult& kpss, Level level = Level::p01) noexcept;

}  // namespace macrovar
