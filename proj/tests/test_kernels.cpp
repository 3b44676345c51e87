#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "riswpt/kernels.hpp"

using namespace riswpt;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n,
                               double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool close(double a, double b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace

TEST_CASE("scalar kernel reference values") {
    const auto& k = kernels::table(kernels::Backend::Scalar);

    // 2x2 matvec against hand multiplication
    const double w[] = {1.0, 2.0, 3.0, 4.0};
    const double x[] = {5.0, 6.0};
    const double b[] = {0.5, -0.5};
    double y[2];
    k.matvec(w, x, b, y, 2, 2);
    CHECK(y[0] == doctest::Approx(1 * 5 + 2 * 6 + 0.5));
    CHECK(y[1] == doctest::Approx(3 * 5 + 4 * 6 - 0.5));

    double xt[2];
    const double g[] = {1.0, -2.0};
    k.matvec_transpose(w, g, xt, 2, 2);
    CHECK(xt[0] == doctest::Approx(1 * 1 - 2 * 3));
    CHECK(xt[1] == doctest::Approx(1 * 2 - 2 * 4));

    double gw[4] = {0, 0, 0, 0};
    k.rank1_accumulate(gw, g, x, 2, 2);
    CHECK(gw[0] == doctest::Approx(1 * 5));
    CHECK(gw[3] == doctest::Approx(-2 * 6));

    CHECK(k.dot(x, x, 2) == doctest::Approx(61.0));
}

TEST_CASE("sgd step is p -= lr g") {
    const auto& k = kernels::table(kernels::Backend::Scalar);
    double p[1] = {0.0};
    const double g[1] = {1.0};
    k.sgd_step(p, g, 1, 0.1);
    CHECK(p[0] == doctest::Approx(-0.1));
}

TEST_CASE("complex triple dot matches naive loop") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{8}}) {
        std::vector<std::complex<double>> a(n), b(n), c(n);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = {u(rng), u(rng)};
            b[i] = {u(rng), u(rng)};
            c[i] = {u(rng), u(rng)};
        }
        std::complex<double> want{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) want += a[i] * b[i] * c[i];
        const auto got = kernels::table(kernels::Backend::Scalar)
                             .complex_triple_dot(a.data(), b.data(), c.data(), n);
        CHECK(close(got.real(), want.real()));
        CHECK(close(got.imag(), want.imag()));
    }
}

TEST_CASE("avx2 backend matches scalar on every kernel") {
    if (!kernels::backend_supported(kernels::Backend::Avx2)) {
        MESSAGE("AVX2 unsupported on this CPU; skipping equivalence");
        return;
    }
    const auto& s = kernels::table(kernels::Backend::Scalar);
    const auto& v = kernels::table(kernels::Backend::Avx2);
    std::mt19937_64 rng(42);

    // Sizes straddling vector width boundaries, including remainders.
    for (std::size_t rows : {1u, 2u, 5u, 8u, 13u}) {
        for (std::size_t cols : {1u, 3u, 4u, 7u, 16u, 33u}) {
            const auto w = random_vec(rng, rows * cols);
            const auto x = random_vec(rng, cols);
            const auto b = random_vec(rng, rows);
            std::vector<double> ys(rows), yv(rows);
            s.matvec(w.data(), x.data(), b.data(), ys.data(), rows, cols);
            v.matvec(w.data(), x.data(), b.data(), yv.data(), rows, cols);
            for (std::size_t r = 0; r < rows; ++r) CHECK(close(ys[r], yv[r]));

            const auto g = random_vec(rng, rows);
            std::vector<double> ts(cols), tv(cols);
            s.matvec_transpose(w.data(), g.data(), ts.data(), rows, cols);
            v.matvec_transpose(w.data(), g.data(), tv.data(), rows, cols);
            for (std::size_t c = 0; c < cols; ++c) CHECK(close(ts[c], tv[c]));

            auto gws = random_vec(rng, rows * cols);
            auto gwv = gws;
            s.rank1_accumulate(gws.data(), g.data(), x.data(), rows, cols);
            v.rank1_accumulate(gwv.data(), g.data(), x.data(), rows, cols);
            for (std::size_t i = 0; i < gws.size(); ++i)
                CHECK(close(gws[i], gwv[i]));
        }
    }

    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 17u, 64u, 129u}) {
        const auto a = random_vec(rng, n);
        const auto b2 = random_vec(rng, n);
        CHECK(close(s.dot(a.data(), b2.data(), n), v.dot(a.data(), b2.data(), n)));

        auto y1 = random_vec(rng, n);
        auto y2 = y1;
        s.axpy(0.37, a.data(), y1.data(), n);
        v.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i]));

        auto p1 = random_vec(rng, n), m1 = random_vec(rng, n, 0.1),
             v1 = random_vec(rng, n, 0.01);
        for (double& xv : v1) xv = std::abs(xv);
        auto p2 = p1, m2 = m1, v2 = v1;
        const auto grad = random_vec(rng, n);
        s.adam_step(p1.data(), grad.data(), m1.data(), v1.data(), n, 1e-3,
                    0.9, 0.999, 1e-8, 0.1, 0.001);
        v.adam_step(p2.data(), grad.data(), m2.data(), v2.data(), n, 1e-3,
                    0.9, 0.999, 1e-8, 0.1, 0.001);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(close(p1[i], p2[i]));
            CHECK(close(m1[i], m2[i]));
            CHECK(close(v1[i], v2[i]));
        }

        auto q1 = random_vec(rng, n);
        auto q2 = q1;
        s.sgd_step(q1.data(), grad.data(), n, 0.05);
        v.sgd_step(q2.data(), grad.data(), n, 0.05);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(q1[i], q2[i]));
    }

    for (std::size_t n : {1u, 2u, 3u, 7u, 20u, 31u}) {
        std::vector<std::complex<double>> a(n), b(n), c(n);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = {u(rng), u(rng)};
            b[i] = {u(rng), u(rng)};
            c[i] = {u(rng), u(rng)};
        }
        const auto rs = s.complex_triple_dot(a.data(), b.data(), c.data(), n);
        const auto rv = v.complex_triple_dot(a.data(), b.data(), c.data(), n);
        CHECK(close(rs.real(), rv.real()));
        CHECK(close(rs.imag(), rv.imag()));
    }
}

TEST_CASE("backend selection is sticky and reports support") {
    const kernels::Backend initial = kernels::active_backend();
    CHECK(kernels::backend_supported(kernels::Backend::Scalar));
    REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    REQUIRE(kernels::set_backend(initial));
}
