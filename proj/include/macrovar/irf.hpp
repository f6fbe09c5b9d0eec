#pragma once

#include "macrovar/timeseries.hpp"
#include "macrovar/var.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace macrovar {

enum class ShockSize { one_sd, unit };

const char* shock_size_name(ShockSize s) noexcept;

struct IrfSpec {
    int horizon = 8;
    double ci_level = 0.95;
    int bootstrap_reps = 1000;
    std::uint64_t seed = 20211;
    ShockSize shock_size = ShockSize::one_sd;
    // Add 1e-10 * I to a covariance that fails the Cholesky factorization.
    bool allow_ridge_jitter = false;
    // 0 uses std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Responses indexed [h](response, shock). `lower`/`upper` are empty for point-only results.
struct IrfResult {
    std::vector<Eigen::MatrixXd> point;
    std::vector<Eigen::MatrixXd> lower;
    std::vector<Eigen::MatrixXd> upper;
    IrfSpec spec;
    std::vector<std::string> names;
    int reps_used = 0;
    int reps_failed = 0;

    bool has_bands() const noexcept { return !lower.empty(); }
    double at(Eigen::Index shock, Eigen::Index response, int h) const {
        return point[static_cast<std::size_t>(h)](response, shock);
    }
};

/// Phi_0 = I, Phi_h = sum_{i=1..min(h,p)} Phi_{h-i} A_i.
std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& m, int horizon);

/// Lower Cholesky factor of the residual covariance, columns scaled to a unit
/// diagonal when `shock_size` is unit.
Eigen::MatrixXd impact_matrix(const VarModel& m, const IrfSpec& spec);

IrfResult orthogonalized_irf(const VarModel& m, const IrfSpec& spec);

/// Seed of bootstrap replication `rep`: splitmix64 finalizer of
/// base + rep * 0x9E3779B97F4A7C15, fed to std::mt19937_64.
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t rep) noexcept;

/// Type-7 (linear interpolation) sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double q);

/// Recursive-design residual bootstrap around fit_var(d, spec). Residual rows
/// are centred, drawn i.i.d. with index = rng() % nobs, and pushed through the
/// fitted recursion from the observed first p rows. Replications that fail to
/// fit or are unstable are skipped; more than 5% skipped is an error.
IrfResult bootstrap_bands(const Dataset& d, const VarSpec& spec, const IrfSpec& irf_spec);

}  // namespace macrovar
