#include <doctest.h>

#include "macrovar/causality.hpp"
#include "macrovar/error.hpp"

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace macrovar;

namespace {

Dataset panel(const Eigen::MatrixXd& y, std::vector<std::string> names, Period start = {1990, 1}) {
    std::vector<TimeSeries> vars;
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        vars.emplace_back(names[static_cast<std::size_t>(j)], start,
                          std::vector<double>(y.col(j).data(), y.col(j).data() + y.rows()));
    return Dataset(std::move(vars));
}

// y_t = 0.8 x_{t-1} + e_t with x white noise.
Eigen::MatrixXd causal_pair(std::mt19937_64& rng, Eigen::Index T) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd d(T, 2);
    double xprev = z(rng);
    for (Eigen::Index t = 0; t < T; ++t) {
        d(t, 1) = 0.8 * xprev + z(rng);
        d(t, 0) = z(rng);
        xprev = d(t, 0);
    }
    return d;
}

}  // namespace

TEST_CASE("exact null in a noiseless system") {
    Eigen::MatrixXd y(30, 2);
    y.row(0) << 1.0, 2.0;
    for (Eigen::Index t = 1; t < 30; ++t) {
        y(t, 0) = 0.5 * y(t - 1, 0);
        y(t, 1) = 0.3 * y(t - 1, 1) + 0.2 * y(t - 1, 0);
    }
    const VarModel m = fit_var(panel(y, {"a", "b"}), {1, false, {}});
    const auto g = granger_wald(m, "b", "a");
    CHECK(g.chi2 == 0.0);
    CHECK(g.pvalue == 1.0);
    CHECK(g.df == 1);
    CHECK_THROWS_AS(granger_wald(m, "a", "a"), Error);
}

TEST_CASE("Wald statistic against an explicit quadratic form") {
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd y = oracle::simulate_var(rng, {oracle::stable_matrix(rng, 3, 0.5), oracle::stable_matrix(rng, 3, 0.3)},
                                                   Eigen::VectorXd::Zero(3), oracle::random_spd(rng, 3), 200);
    const VarModel m = fit_var(panel(y, {"a", "b", "c"}), {2, true, {}});
    // Unrestricted equation for c by hand: regressors [1, y(-1), y(-2)].
    const Eigen::Index n = 198;
    Eigen::MatrixXd x(n, 7);
    for (Eigen::Index t = 0; t < n; ++t) {
        x(t, 0) = 1.0;
        x.block(t, 1, 1, 3) = y.row(t + 1);
        x.block(t, 4, 1, 3) = y.row(t);
    }
    const Eigen::VectorXd yc = y.col(2).tail(n);
    const Eigen::MatrixXd xtx_inv = oracle::inverse(oracle::matmul(x.transpose(), x));
    const Eigen::VectorXd b = xtx_inv * (x.transpose() * yc);
    const double s2 = (yc - x * b).squaredNorm() / static_cast<double>(n - 7);
    // Restrict the lags of a: columns 1 and 4.
    Eigen::Vector2d r(b(1), b(4));
    Eigen::Matrix2d v;
    v << xtx_inv(1, 1), xtx_inv(1, 4), xtx_inv(4, 1), xtx_inv(4, 4);
    v *= s2;
    const double chi2 = r.dot(oracle::inverse(v) * r);
    const auto g = granger_wald(m, "a", "c");
    CHECK(g.chi2 == doctest::Approx(chi2).epsilon(1e-9));
    CHECK(g.df == 2);
    CHECK(g.pvalue == doctest::Approx(std::exp(-chi2 / 2)).epsilon(1e-9));
}

TEST_CASE("power and size") {
    std::mt19937_64 rng(2);
    int power = 0;
    int size = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const VarModel m = fit_var(panel(causal_pair(rng, 1000), {"x", "y"}), {});
        power += granger_wald(m, "x", "y").pvalue < 0.001;
        size += granger_wald(m, "y", "x").pvalue < 0.05;
    }
    CHECK(power >= 198);
    CHECK(size <= 20);
}

TEST_CASE("affine invariance and monotone p-values") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd y = causal_pair(rng, 120);
    Eigen::MatrixXd z = y;
    z.col(0) = 250.0 * z.col(0).array() + 3.0;
    z.col(1) = 0.02 * z.col(1).array() - 9.0;
    const VarModel a = fit_var(panel(y, {"x", "y"}), {2, true, {}});
    const VarModel b = fit_var(panel(z, {"x", "y"}), {2, true, {}});
    for (auto [c, e] : {std::pair{"x", "y"}, std::pair{"y", "x"}})
        CHECK(std::abs(granger_wald(a, c, e).chi2 - granger_wald(b, c, e).chi2) <= 1e-6);
}

TEST_CASE("p-values are uniform under independence") {
    std::mt19937_64 rng(4);
    const int reps = 500;
    int bins[10] = {};
    for (int r = 0; r < reps; ++r) {
        const VarModel m = fit_var(panel(oracle::normal_matrix(rng, 200, 3), {"a", "b", "c"}), {});
        const double p = granger_wald(m, "a", "b").pvalue;
        ++bins[std::min(9, static_cast<int>(p * 10))];
    }
    for (int b : bins) {
        CHECK(b >= 25);
        CHECK(b <= 75);
    }
}

TEST_CASE("table layout and per-row errors") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd y = oracle::normal_matrix(rng, 70, 5);
    const Dataset d = panel(y, {"oil", "ipi", "fx", "cpi", "rate"}, {2004, 2});
    const std::vector<SampleRange> samples{
        {"full", {2004, 2}, {2021, 3}}, {"pre2008", {2004, 1}, {2008, 3}}, {"post2008", {2008, 4}, {2021, 3}}};
    const auto rows = granger_table(d, {1, true, {}}, samples, "oil");
    REQUIRE(rows.size() == 24);
    CHECK(rows[0].cause == "oil");
    CHECK(rows[0].effect == "ipi");
    CHECK(rows[3].effect == "rate");
    CHECK(rows[4].cause == "ipi");
    CHECK(rows[7].cause == "rate");
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(rows[i].result.has_value());
        CHECK(rows[i].result->sample_label == "full");
        CHECK(rows[i + 8].result.has_value());  // 18 rows, k p + 11 = 16
        CHECK(rows[i + 16].result.has_value());
    }
    // Two lags: the pre-2008 window (18 rows) no longer supports estimation.
    const auto lag2 = granger_table(d, {2, true, {}}, samples, "oil");
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(lag2[i].result.has_value());
        CHECK_FALSE(lag2[i + 8].result.has_value());
        CHECK_FALSE(lag2[i + 8].error.empty());
        CHECK(lag2[i + 16].result.has_value());
    }
    // Bivariate mode fits a two-variable system per pair.
    const auto bi = granger_table(d, {1, true, {}}, {samples[0]}, "oil", GrangerMode::bivariate);
    const Dataset pair({d.at("oil"), d.at("fx")});
    const VarModel m2 = fit_var(pair, {});
    CHECK(bi[1].result->chi2 == doctest::Approx(granger_wald(m2, "oil", "fx").chi2).epsilon(1e-12));
    CHECK_THROWS_AS(granger_table(d, {}, samples, "gold"), Error);
}
