#pragma once

#include "macrovar/causality.hpp"
#include "macrovar/irf.hpp"
#include "macrovar/timeseries.hpp"
#include "macrovar/unitroot.hpp"
#include "macrovar/var.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace macrovar {

enum class DateFormat { automatic, iso, quarter };
enum class SeriesRole { shock, endogenous, table_only };

struct SeriesConfig {
    std::string name;
    std::string label;  // human-readable, used in tables and plots
    std::filesystem::path path;
    std::string date_column = "DATE";
    std::string value_column;  // empty: the single non-date column
    DateFormat date_format = DateFormat::automatic;
    std::vector<Transform> transforms;  // applied left to right
    SeriesRole role = SeriesRole::endogenous;
};

enum class GrowthBasis { qoq, yoy };

struct UnitRootOptions {
    LagCriterion adf_lag_selection = LagCriterion::bic;
    int adf_max_lags = -1;
    KpssNull kpss_null = KpssNull::level;
    int kpss_bandwidth = -1;
};

struct PipelineConfig {
    std::string name = "pipeline";
    std::filesystem::path source;  // config file, empty when built in code
    std::vector<SeriesConfig> series;
    Period sample_from{2004, 1};
    Period sample_to{2021, 3};
    std::vector<SampleRange> subsamples;  // in addition to the full sample
    GrowthBasis growth_basis = GrowthBasis::qoq;
    VarSpec var;
    int lag_select_max = 4;
    GrangerMode granger_mode = GrangerMode::conditional;
    UnitRootOptions unitroot;
    IrfSpec irf;
    std::filesystem::path output_dir = "out";

    const SeriesConfig& shock() const;
    // Full sample followed by the configured subsamples.
    std::vector<SampleRange> samples() const;
};

/// Parse a quarterly CSV. Dates may be YYYY-MM-DD (first month of the
/// quarter), YYYYQn or YYYY-Qn. Rows are sorted; duplicates and gaps are errors.
TimeSeries read_series(const SeriesConfig& cfg);

/// Writes `DATE,<name>` rows with ISO dates and round-trip precision.
void write_series_csv(const TimeSeries& s, const std::filesystem::path& path);

PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir);

/// Canonical YAML rendering of a resolved config (absolute paths, every default spelled out).
std::string render_config(const PipelineConfig& cfg);

/// Transform chain with growth resolved to the configured basis.
std::vector<Transform> resolved_chain(const PipelineConfig& cfg, const SeriesConfig& s);

/// Raw series restricted to the sample window, then transformed.
TimeSeries load_transformed(const PipelineConfig& cfg, const SeriesConfig& s);

/// Shock and endogenous series, transformed then aligned, in config order.
Dataset assemble(const PipelineConfig& cfg);

/// Level form used by the unit-root table: the chain without a trailing diff.
TimeSeries load_level(const PipelineConfig& cfg, const SeriesConfig& s);

inline constexpr const char* kDefaultFetchBase = "https://fred.stlouisfed.org/graph/fredgraph.csv";

/// GET <base_url>?id=<series_id>. Non-200 or transport failure is Errc::fetch.
std::string fetch_series_csv(const std::string& series_id, const std::string& base_url = kDefaultFetchBase,
                             std::chrono::seconds timeout = std::chrono::seconds(30));

}  // namespace macrovar
