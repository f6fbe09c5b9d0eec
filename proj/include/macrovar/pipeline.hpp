#pragma once

// Table-level computations behind the command-line front end, and their
// text/CSV/SVG renderings.

#include "macrovar/causality.hpp"
#include "macrovar/ingest.hpp"
#include "macrovar/irf.hpp"
#include "macrovar/unitroot.hpp"
#include "macrovar/var.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace macrovar {

struct UnitRootRow {
    std::string name;
    std::string level_label;  // e.g. log(oil)
    std::string diff_label;   // e.g. D.log(oil)
    AdfResult adf_level;
    KpssResult kpss_level;
    AdfResult adf_diff;
    KpssResult kpss_diff;

    StationarityVerdict level_verdict() const noexcept { return classify(adf_level, kpss_level, Level::p01); }
    StationarityVerdict diff_verdict() const noexcept { return classify(adf_diff, kpss_diff, Level::p01); }
};

/// One row per configured series, in config order. Levels use a constant and
/// trend in the ADF regression, first differences a constant only.
std::vector<UnitRootRow> unitroot_table(const PipelineConfig& cfg);

std::string render_unitroot_text(const std::vector<UnitRootRow>& rows, const PipelineConfig& cfg);
std::string render_unitroot_csv(const std::vector<UnitRootRow>& rows);

std::string render_lagselect_text(const LagSelection& sel, int lags_used);
std::string render_lagselect_csv(const LagSelection& sel);

/// "**" below 5%, "*" below 10%.
std::string granger_stars(double pvalue);
std::string render_granger_text(const std::vector<GrangerRow>& rows, const std::vector<SampleRange>& samples);
std::string render_granger_csv(const std::vector<GrangerRow>& rows);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes) noexcept;
/// First 8 hex digits of fnv1a(render_config(cfg)), output_dir excluded.
std::string config_hash(const PipelineConfig& cfg);

/// h,point,lower,upper for one (shock, response) pair.
std::string render_irf_csv(const IrfResult& irf, Eigen::Index shock, Eigen::Index response);

/// 640x480 viewBox. Horizons map linearly onto x in [70, 610]; values onto
/// y in [420, 50] over [min(lower, 0), max(upper, 0)] padded by 5%.
std::string render_irf_svg(const IrfResult& irf, Eigen::Index shock, Eigen::Index response,
                           const std::string& title);

struct IrfFiles {
    std::vector<std::filesystem::path> csv;
    std::vector<std::filesystem::path> svg;
};

/// Responses of every non-shock variable to the shock variable, written as
/// irf_<hash>_<response>.{csv,svg} under `dir`.
IrfFiles write_irf_outputs(const IrfResult& irf, const PipelineConfig& cfg, const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace macrovar
