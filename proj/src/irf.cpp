#include "macrovar/irf.hpp"

#include "macrovar/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <thread>

namespace macrovar {

const char* shock_size_name(ShockSize s) noexcept { return s == ShockSize::unit ? "unit" : "one-sd"; }

std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& m, int horizon) {
    if (horizon < 0) throw Error(Errc::config, fmt::format("IRF horizon must be >= 0, got {}", horizon));
    std::vector<Eigen::MatrixXd> phi;
    phi.reserve(static_cast<std::size_t>(horizon) + 1);
    phi.push_back(Eigen::MatrixXd::Identity(m.k, m.k));
    for (int h = 1; h <= horizon; ++h) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m.k, m.k);
        for (int i = 1; i <= std::min(h, m.p); ++i)
            acc.noalias() += phi[static_cast<std::size_t>(h - i)] * m.coef[static_cast<std::size_t>(i - 1)];
        phi.push_back(std::move(acc));
    }
    return phi;
}

Eigen::MatrixXd impact_matrix(const VarModel& m, const IrfSpec& spec) {
    Eigen::LLT<Eigen::MatrixXd> llt(m.sigma);
    auto ok = [&] {
        return llt.info() == Eigen::Success &&
               (llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all();
    };
    if (!ok() && spec.allow_ridge_jitter) {
        llt.compute(m.sigma + 1e-10 * Eigen::MatrixXd::Identity(m.k, m.k));
    }
    if (!ok())
        throw Error(Errc::identification,
                    "residual covariance is not positive definite; Cholesky identification failed "
                    "(a ridge jitter of 1e-10 can be enabled explicitly)");
    Eigen::MatrixXd p = llt.matrixL();
    if (spec.shock_size == ShockSize::unit) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) p.col(j) /= p(j, j);
    }
    return p;
}

namespace {

std::vector<Eigen::MatrixXd> responses(const VarModel& m, const IrfSpec& spec) {
    const Eigen::MatrixXd p = impact_matrix(m, spec);
    auto phi = ma_coefficients(m, spec.horizon);
    for (auto& ph : phi) ph = (ph * p).eval();
    return phi;
}

}  // namespace

IrfResult orthogonalized_irf(const VarModel& m, const IrfSpec& spec) {
    IrfResult r;
    r.point = responses(m, spec);
    r.spec = spec;
    r.names = m.names;
    return r;
}

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t rep) noexcept {
    std::uint64_t z = base + rep * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw Error(Errc::insufficient_data, "quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IrfResult bootstrap_bands(const Dataset& d, const VarSpec& spec, const IrfSpec& irf_spec) {
    if (!(irf_spec.ci_level > 0.0 && irf_spec.ci_level < 1.0))
        throw Error(Errc::config, fmt::format("ci_level must lie in (0, 1), got {}", irf_spec.ci_level));
    if (irf_spec.bootstrap_reps < 100)
        throw Error(Errc::config, fmt::format("band output needs at least 100 replications, got {}",
                                              irf_spec.bootstrap_reps));

    const VarModel model = fit_var(d, spec);
    const Stability st = stability(model);
    if (!st.stable)
        throw Error(Errc::bootstrap_failure,
                    fmt::format("fitted VAR is not stable (max companion modulus {:.6f})", st.max_modulus));

    IrfResult out = orthogonalized_irf(model, irf_spec);

    const Eigen::MatrixXd centred = model.residuals.rowwise() - model.residuals.colwise().mean();
    const Eigen::MatrixXd initial = model.data.topRows(model.p);
    const auto reps = static_cast<std::size_t>(irf_spec.bootstrap_reps);
    const auto nobs = static_cast<std::uint64_t>(model.nobs);

    std::vector<std::optional<std::vector<Eigen::MatrixXd>>> draws(reps);
    auto run = [&](std::size_t begin, std::size_t end) {
        Eigen::MatrixXd shocks(model.nobs, model.k);
        for (std::size_t rep = begin; rep < end; ++rep) {
            std::mt19937_64 rng(replication_seed(irf_spec.seed, rep));
            for (Eigen::Index t = 0; t < model.nobs; ++t)
                shocks.row(t) = centred.row(static_cast<Eigen::Index>(rng() % nobs));
            try {
                const Eigen::MatrixXd y = simulate_var(model, initial, shocks);
                const VarModel m = fit_var_matrix(y, model.names, model.p, model.has_constant);
                if (!stability(m).stable) continue;
                draws[rep] = responses(m, irf_spec);
            } catch (const Error&) {
            }
        }
    };

    unsigned threads = irf_spec.threads ? irf_spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
    if (threads <= 1) {
        run(0, reps);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (reps + threads - 1) / threads;
        for (std::size_t b = 0; b < reps; b += chunk) pool.emplace_back(run, b, std::min(reps, b + chunk));
    }

    std::vector<const std::vector<Eigen::MatrixXd>*> ok;
    for (const auto& dr : draws)
        if (dr) ok.push_back(&*dr);
    out.reps_used = static_cast<int>(ok.size());
    out.reps_failed = static_cast<int>(reps - ok.size());
    if (static_cast<double>(out.reps_failed) > 0.05 * static_cast<double>(reps))
        throw Error(Errc::bootstrap_failure,
                    fmt::format("{} of {} bootstrap replications were unstable or failed to fit (limit 5%)",
                                out.reps_failed, reps));

    const double qlo = (1.0 - irf_spec.ci_level) / 2.0;
    const double qhi = (1.0 + irf_spec.ci_level) / 2.0;
    const auto H = static_cast<std::size_t>(irf_spec.horizon);
    out.lower.assign(H + 1, Eigen::MatrixXd(model.k, model.k));
    out.upper.assign(H + 1, Eigen::MatrixXd(model.k, model.k));
    std::vector<double> cell(ok.size());
    for (std::size_t h = 0; h <= H; ++h) {
        for (Eigen::Index i = 0; i < model.k; ++i) {
            for (Eigen::Index j = 0; j < model.k; ++j) {
                for (std::size_t r = 0; r < ok.size(); ++r) cell[r] = (*ok[r])[h](i, j);
                std::sort(cell.begin(), cell.end());
                out.lower[h](i, j) = sorted_quantile(cell, qlo);
                out.upper[h](i, j) = sorted_quantile(cell, qhi);
            }
        }
    }
    return out;
}

}  // namespace macrovar
