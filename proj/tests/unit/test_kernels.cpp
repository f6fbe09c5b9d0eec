#include <doctest.h>

#include "macrovar/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace k = macrovar::kernels;

namespace {

std::vector<double> draw(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z(0.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

TEST_CASE("scalar reference kernels on small inputs") {
    const auto& t = k::scalar_table();
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 0, -1, 1, 0.5};
    CHECK(t.dot(a.data(), b.data(), 5) == doctest::Approx(2 - 3 + 4 + 2.5));
    CHECK(t.sum_sq_dev(a.data(), 3.0, 5) == doctest::Approx(10.0));
    CHECK(t.lagged_dot(a.data(), 5, 1) == doctest::Approx(1 * 2 + 2 * 3 + 3 * 4 + 4 * 5));
    CHECK(t.lagged_dot(a.data(), 5, 5) == 0.0);
    std::vector<double> y = b;
    t.axpy(2.0, a.data(), y.data(), 5);
    CHECK(y[4] == doctest::Approx(10.5));
    CHECK(t.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    const k::KernelTable* v = k::avx2_table();
    if (!v) {
        MESSAGE("AVX2 unavailable on this host; equivalence not exercised");
        return;
    }
    const auto& s = k::scalar_table();
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 99u, 1000u, 4097u}) {
        const auto a = draw(rng, n);
        const auto b = draw(rng, n);
        CHECK(close(s.dot(a.data(), b.data(), n), v->dot(a.data(), b.data(), n)));
        CHECK(close(s.sum_sq_dev(a.data(), 0.7, n), v->sum_sq_dev(a.data(), 0.7, n)));
        for (std::size_t lag : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{9}, n})
            CHECK(close(s.lagged_dot(a.data(), n, lag), v->lagged_dot(a.data(), n, lag)));
        auto y1 = b;
        auto y2 = b;
        s.axpy(-1.3, a.data(), y1.data(), n);
        v->axpy(-1.3, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i]));
    }
}

TEST_CASE("active table respects the override") {
    const auto& t = k::active();
    const char* env = std::getenv("MACROVAR_KERNELS");
    if (env && std::string_view(env) == "scalar") CHECK(t.isa == k::Isa::scalar);
    CHECK(!k::isa_name(t.isa).empty());
}
