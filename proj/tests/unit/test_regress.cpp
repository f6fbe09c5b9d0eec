#include <doctest.h>

#include "macrovar/error.hpp"
#include "macrovar/regress.hpp"
#include "macrovar/var.hpp"

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace macrovar;

namespace {

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out(x.rows(), x.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(x.cols()) = x;
    return out;
}

}  // namespace

TEST_CASE("exact fit recovers coefficients") {
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd x = with_intercept(oracle::normal_matrix(rng, 40, 3));
    Eigen::VectorXd b(4);
    b << 0.5, -1.25, 3.0, 0.125;
    const Eigen::VectorXd y = x * b;
    const auto r = ols(DesignMatrix(x), y);
    CHECK((r.coefficients - b).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(r.rss <= 1e-16 * y.squaredNorm());
    CHECK(r.nobs == 40);
    CHECK(r.df == 36);
    CHECK(r.names.front() == "x0");
}

TEST_CASE("intercept-only regression returns the mean") {
    Eigen::VectorXd y(5);
    y << 3, 1, 4, 1, 5;
    const auto r = ols(DesignMatrix(Eigen::MatrixXd::Ones(5, 1)), y);
    CHECK(r.coefficients(0) == doctest::Approx(2.8).epsilon(1e-14));
    CHECK(r.sigma2 == doctest::Approx((y.array() - 2.8).square().sum() / 4));
    CHECK(r.stderr_(0) == doctest::Approx(std::sqrt(r.sigma2 / 5)));
}

TEST_CASE("standard errors and coefficients against the DGP") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    const Eigen::Index n = 10000;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = z(rng);
        x(i, 0) = 1.0;
        x(i, 1) = xi;
        y(i) = 1.0 + 2.0 * xi + 0.1 * z(rng);
    }
    const auto r = ols(DesignMatrix(x, {"const", "x"}), y);
    CHECK(std::abs(r.coefficients(0) - 1.0) <= 3 * r.stderr_(0));
    CHECK(std::abs(r.coefficients(1) - 2.0) <= 3 * r.stderr_(1));
    // True standard errors: sigma * sqrt(diag((X'X)^-1)), via an independent inverse.
    const Eigen::MatrixXd xtx_inv = oracle::inverse(oracle::matmul(x.transpose(), x));
    for (Eigen::Index j = 0; j < 2; ++j) {
        const double truth = 0.1 * std::sqrt(xtx_inv(j, j));
        CHECK(std::abs(r.stderr_(j) - truth) <= 0.1 * truth);
        CHECK(r.stderr_(j) == std::sqrt(r.coef_cov(j, j)));
    }
    CHECK((r.coef_cov - r.coef_cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd ortho = x.transpose() * r.residuals;
    CHECK(ortho.cwiseAbs().maxCoeff() <= 1e-8 * y.norm() * x.norm());
}

TEST_CASE("collinear columns are named") {
    std::mt19937_64 rng(3);
    Eigen::MatrixXd x = oracle::normal_matrix(rng, 30, 3);
    x.col(2) = 2.0 * x.col(0) - x.col(1);
    const Eigen::VectorXd y = oracle::normal_matrix(rng, 30, 1);
    try {
        ols(DesignMatrix(x, {"a", "b", "c"}), y);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::collinear);
        CHECK(std::string(e.what()).find("'c'") != std::string::npos);
    }
    try {
        ols(DesignMatrix(oracle::normal_matrix(rng, 3, 3)), Eigen::VectorXd::Ones(3));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_data);
    }
}

TEST_CASE("projection idempotence and shift invariance") {
    std::mt19937_64 rng(4);
    const Eigen::MatrixXd x = with_intercept(oracle::normal_matrix(rng, 80, 4));
    const Eigen::VectorXd y = oracle::normal_matrix(rng, 80, 1);
    const auto r = ols(DesignMatrix(x), y);
    const Eigen::VectorXd fitted = y - r.residuals;
    const auto again = ols(DesignMatrix(x), fitted);
    CHECK((again.coefficients - r.coefficients).cwiseAbs().maxCoeff() <= 1e-10);

    const auto shifted = ols(DesignMatrix(x), (y.array() + 7.5).matrix());
    CHECK(shifted.coefficients(0) - r.coefficients(0) == doctest::Approx(7.5).epsilon(1e-10));
    CHECK((shifted.coefficients.tail(4) - r.coefficients.tail(4)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("information criteria") {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    const auto ic0 = information_criteria(one, 100, 0);
    CHECK(ic0.aic == 0.0);
    CHECK(ic0.bic == 0.0);
    CHECK(ic0.hq == 0.0);

    const Eigen::MatrixXd s = (Eigen::MatrixXd(2, 2) << 2.0, 0.3, 0.3, 1.0).finished();
    const auto a = information_criteria(s, 60, 6);
    const auto b = information_criteria(s, 60, 7);
    CHECK(b.aic > a.aic);
    CHECK(b.bic > a.bic);
    CHECK(b.hq > a.hq);
    CHECK(a.aic == doctest::Approx(std::log(2.0 - 0.09) + 12.0 / 60));
    CHECK(a.bic == doctest::Approx(std::log(1.91) + 6 * std::log(60.0) / 60));
    CHECK(a.hq == doctest::Approx(std::log(1.91) + 12 * std::log(std::log(60.0)) / 60));

    const Eigen::MatrixXd bad = (Eigen::MatrixXd(2, 2) << 1.0, 1.0, 1.0, 1.0).finished();
    CHECK_THROWS_AS(information_criteria(bad, 60, 2), Error);
}

TEST_CASE("criteria recover the lag order of a VAR(2)") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd a1 = (Eigen::MatrixXd(2, 2) << 0.4, 0.1, -0.1, 0.3).finished();
    const Eigen::MatrixXd a2 = (Eigen::MatrixXd(2, 2) << -0.3, 0.0, 0.15, -0.25).finished();
    const Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    const Eigen::MatrixXd sig = Eigen::MatrixXd::Identity(2, 2);
    int hits = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const Eigen::MatrixXd y = oracle::simulate_var(rng, {a1, a2}, c, sig, 2000);
        const int p_max = 4;
        double best = 1e300;
        int arg = 0;
        for (int p = 1; p <= p_max; ++p) {
            const VarModel m = fit_var_matrix(y, {"a", "b"}, p, true, p_max - p);
            const double bic = information_criteria(m.sigma, m.nobs, m.n_params()).bic;
            if (bic < best) {
                best = bic;
                arg = p;
            }
        }
        hits += arg == 2;
    }
    CHECK(hits >= 190);
}
