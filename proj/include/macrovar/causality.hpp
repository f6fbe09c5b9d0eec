#pragma once

#include "macrovar/timeseries.hpp"
#include "macrovar/var.hpp"

#include <optional>
#include <string>
#include <vector>

namespace macrovar {

struct GrangerResult {
    std::string cause;
    std::string effect;
    double chi2 = 0.0;
    int df = 0;
    double pvalue = 1.0;
    std::string sample_label = "custom";
};

/// Wald test that every lag of `cause` drops out of `effect`'s equation.
GrangerResult granger_wald(const VarModel& m, const std::string& cause, const std::string& effect);

struct SampleRange {
    std::string label;
    Period from;
    Period to;
};

enum class GrangerMode { conditional, bivariate };

struct GrangerRow {
    std::string cause;
    std::string effect;
    std::string sample_label;
    std::optional<GrangerResult> result;
    std::string error;  // set when the sample could not be estimated
};

/// For every sample: oil -> each other variable, then each other -> oil, in
/// dataset order (2 * (k - 1) rows per sample). `d` is the already
/// transformed panel. Failures are recorded per row.
std::vector<GrangerRow> granger_table(const Dataset& d, const VarSpec& spec, const std::vector<SampleRange>& samples,
                                      const std::string& shock, GrangerMode mode = GrangerMode::conditional);

}  // namespace macrovar
