#include <catch_amalgamated.hpp>

#include <random>
#include <thread>

#include "slitfano/greens.hpp"

using namespace slitfano;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PhysicalConfig figure_config(double eps = 0.05) { return PhysicalConfig{1.0, 0.4, eps}; }

// sqrt(k^2 - q^2) for real k: positive or positive imaginary
cplx zeta_oracle(double k, double q) {
    const double w = k * k - q * q;
    return w >= 0 ? cplx(std::sqrt(w), 0.0) : cplx(0.0, std::sqrt(-w));
}

// Plain Rayleigh series of the quasi-periodic Green function, |x2 - y2| > 0.
cplx green_oracle(double k, double kappa, double d, Point x, Point y, int terms) {
    cplx s = 0.0;
    for (int n = -terms; n <= terms; ++n) {
        const double q = kappa + 2.0 * pi * n / d;
        const cplx z = zeta_oracle(k, q);
        s += std::exp(I * (q * (x.x1 - y.x1)) + I * z * std::abs(x.x2 - y.x2)) / z;
    }
    return -I / (2.0 * d) * s;
}

// beta_e by brute-force partial sums over |n| <= terms
cplx beta_e_oracle(double k, double kappa, const PhysicalConfig& c, long terms) {
    cplx s = std::log(2.0 * pi * c.eps / c.d) / pi - I / (c.d * zeta_oracle(k, kappa));
    for (long n = terms; n >= 1; --n)
        for (int sg : {-1, 1}) {
            const double q = kappa + 2.0 * pi * sg * n / c.d;
            s += 1.0 / (2.0 * pi * n) - I / (c.d * zeta_oracle(k, q));
        }
    return s;
}

} // namespace

TEST_CASE("zeta examples", "[greens]") {
    const PhysicalConfig c = figure_config();
    CHECK(std::abs(zeta(0, {pi, 0.0}, c) - pi) < 1e-14);
    CHECK(std::abs(zeta(1, {pi, 0.0}, c) - cplx(0.0, pi * std::sqrt(3.0))) < 1e-12);
    CHECK_THAT(zeta(0, {2.83, 0.1}, c).real(), WithinAbs(std::sqrt(2.83 * 2.83 - 0.01), 1e-14));
    CHECK_THAT(zeta(0, {2.83, 0.1}, c).real(), WithinAbs(2.828233, 1e-6));
}

TEST_CASE("zeta rejects branch points", "[greens]") {
    const PhysicalConfig c = figure_config();
    try {
        zeta(0, {0.1 + 1e-9, 0.1}, c);
        FAIL("expected BranchPointProximity");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BranchPointProximity);
    }
}

TEST_CASE("zeta branch consistency", "[greens][property]") {
    const PhysicalConfig c = figure_config();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> K(0.05, 9.0), Q(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double k = K(rng), kappa = Q(rng);
        for (int n = -3; n <= 3; ++n) {
            const double kn = kappa_n(n, kappa, c);
            if (std::abs(std::abs(kn) - k) < 1e-5) continue;
            const cplx z = zeta(n, {k, kappa}, c);
            CHECK(z.imag() >= 0.0);
            if (std::abs(kn) < k) {
                CHECK(z.real() > 0.0);
                CHECK(z.imag() == 0.0);
            } else {
                CHECK(z.real() == 0.0);
            }
        }
    }
    // complex k continues each branch from the real axis into Im k < 0
    for (double k : {0.5, 2.9, 6.0})
        for (int n : {0, 1, -1}) {
            const cplx real_k = zeta(n, {k, 0.1}, c);
            const cplx below = zeta(n, {cplx(k, -1e-7), 0.1}, c);
            CHECK(std::abs(real_k - below) < 1e-5);
        }
}

TEST_CASE("diamond membership", "[greens]") {
    const PhysicalConfig c = figure_config();
    CHECK(in_diamond({2.83, 0.1}, c));
    CHECK_FALSE(in_diamond({0.0, 0.0}, c));
    CHECK_FALSE(in_diamond({6.5, 0.1}, c));
    CHECK(in_diamond({6.1, 0.1}, c));
    CHECK_FALSE(in_diamond({6.2, 0.1}, c));
}

TEST_CASE("quasi-periodic Green function", "[greens]") {
    const PhysicalConfig c = figure_config();
    const SpectralPoint pt{2.0, 0.1};
    const Point x{0.13, 2.0}, y{-0.21, 1.0};
    SECTION("matches the plain Rayleigh series away from the line") {
        const cplx ref = green_oracle(2.0, 0.1, c.d, x, y, 60);
        CHECK(std::abs(quasiperiodic_green(pt, c, x, y) - ref) < 1e-12);
        CHECK(std::abs(green_oracle(2.0, 0.1, c.d, x, y, 30) - green_oracle(2.0, 0.1, c.d, x, y, 60)) < 1e-12);
    }
    SECTION("Bloch quasi-periodicity") {
        const Point xs{x.x1 + c.d, x.x2};
        const cplx g0 = quasiperiodic_green(pt, c, x, y), g1 = quasiperiodic_green(pt, c, xs, y);
        CHECK(std::abs(g1 - std::exp(I * (0.1 * c.d)) * g0) < 1e-12);
        const Point ys{y.x1 + c.d, y.x2};
        CHECK(std::abs(quasiperiodic_green(pt, c, xs, ys) - g0) < 1e-12);
    }
    SECTION("same line agrees with a slowly converging brute-force sum") {
        const Point a{0.05, 1.0}, b{-0.12, 1.0};
        const cplx g = quasiperiodic_green(pt, c, a, b);
        // the terms decay like 1/n; the exact tail of the 1/|n| asymptote is added to the oracle
        const int M = 200000;
        cplx s = green_oracle(2.0, 0.1, c.d, a, b, M);
        const double u = 2.0 * pi * (a.x1 - b.x1) / c.d;
        cplx tail = 0.0;
        for (int n = M + 1; n <= 4 * M; ++n) tail += 2.0 * std::cos(n * u) / (2.0 * pi * n / c.d);
        s += -I / (2.0 * c.d) * (-I) * tail;
        CHECK(std::abs(g - s) < 1e-6);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(quasiperiodic_green(pt, c, x, x), Error);
    }
}

TEST_CASE("half-space Green function has zero normal derivative on the slab face", "[greens]") {
    const PhysicalConfig c = figure_config();
    const SpectralPoint pt{2.0, 0.1};
    const Point x{0.1, 1.7};
    const double h = 1e-4;
    auto g = [&](double y2) { return halfspace_green(pt, c, x, Point{0.3, y2}); };
    const cplx dg = (-3.0 * g(1.0) + 4.0 * g(1.0 + h) - g(1.0 + 2.0 * h)) / (2.0 * h);
    CHECK(std::abs(dg) < 1e-6);
    // the plain Green function has a nonzero derivative there
    auto g0 = [&](double y2) { return quasiperiodic_green(pt, c, x, Point{0.3, y2}); };
    CHECK(std::abs((g0(1.0 + h) - g0(1.0 - h)) / (2.0 * h)) > 1e-2);
}

TEST_CASE("exterior kernels", "[greens]") {
    const PhysicalConfig c = figure_config();
    SECTION("cross kernels swap at kappa = 0") {
        for (double X : {-0.45, -0.1, 0.2, 0.4})
            for (double Y : {-0.3, 0.05, 0.35})
                CHECK(std::abs(exterior_kernel({2.0, 0.0}, c, X, Y, ExteriorKind::cross_plus) -
                               exterior_kernel({2.0, 0.0}, c, Y, X, ExteriorKind::cross_minus)) < 1e-12);
    }
    SECTION("same-slit kernel is even in X - Y at kappa = 0") {
        for (double X : {-0.4, 0.0, 0.3})
            for (double Y : {-0.25, 0.1, 0.45})
                if (X != Y)
                    CHECK(std::abs(exterior_kernel({2.0, 0.0}, c, X, Y, ExteriorKind::same_slit) -
                                   exterior_kernel({2.0, 0.0}, c, Y, X, ExteriorKind::same_slit)) < 1e-12);
    }
    SECTION("remainder after the log and beta_e is small of order eps^2 |ln eps|") {
        auto remainder = [](double eps) {
            const PhysicalConfig ce = figure_config(eps);
            const auto b = beta_constants({2.0, 0.0}, ce);
            double r = 0.0;
            for (double X : {-0.45, -0.2, 0.1, 0.4})
                for (double Y : {-0.35, 0.0, 0.3})
                    if (X != Y)
                        r = std::max(r, std::abs(exterior_kernel({2.0, 0.0}, ce, X, Y, ExteriorKind::same_slit) -
                                                 std::log(std::abs(X - Y)) / pi - b.beta_e));
            return r;
        };
        const double r1 = remainder(0.05), r2 = remainder(0.025);
        const double expected = (0.05 * 0.05 * std::log(0.05)) / (0.025 * 0.025 * std::log(0.025));
        const double ratio = (r1 / r2) / expected;
        INFO("r(0.05) = " << r1 << ", r(0.025) = " << r2 << ", ratio / expected = " << ratio);
        CHECK(ratio > 0.25);
        CHECK(ratio < 4.0);
        CHECK(r1 < 0.05);
    }
}

TEST_CASE("interior mode coefficients", "[greens]") {
    const double eps = 0.05;
    for (double k : {0.7, 2.0, 2.9}) {
        CHECK_THAT(interior_mode_coefficient(k, eps, 0, InteriorKind::same_end).real(),
                   WithinRel(1.0 / (eps * k * std::tan(k)), 1e-13));
        CHECK_THAT(interior_mode_coefficient(k, eps, 0, InteriorKind::opposite_end).real(),
                   WithinRel(1.0 / (eps * k * std::sin(k)), 1e-13));
    }
    const double g1 = std::sqrt(std::pow(pi / eps, 2) - 1.0);
    CHECK_THAT(g1, WithinAbs(62.82, 0.01));
    const cplx c1 = interior_mode_coefficient(1.0, eps, 1, InteriorKind::same_end);
    CHECK_THAT(c1.real(), WithinRel(-1.0 / (eps * g1), 1e-13));
    CHECK_THAT(c1.real(), WithinAbs(-0.3183, 1e-4));
    CHECK(std::abs(c1.imag()) < 1e-15);
    // no overflow deep in the evanescent range
    const cplx c400 = interior_mode_coefficient(1.0, 1e-3, 400, InteriorKind::opposite_end);
    CHECK(std::isfinite(c400.real()));
    CHECK(std::abs(c400) < 1e-300);
    try {
        interior_mode_coefficient(pi, eps, 0, InteriorKind::same_end);
        FAIL("expected ModeResonance");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ModeResonance);
    }
}

TEST_CASE("beta constants examples", "[greens]") {
    const PhysicalConfig c = figure_config();
    const auto b = beta_constants({pi / 2, 0.0}, c);
    CHECK_THAT(b.beta_i.real(), WithinAbs(2.0 * std::log(2.0) / pi, 1e-12));
    CHECK_THAT(b.beta_i.real(), WithinAbs(0.44127, 1e-5));
    CHECK_THAT(b.beta_tilde.real(), WithinAbs(40.0 / pi, 1e-12));
    CHECK(std::abs(b.beta - (b.beta_e + b.beta_i)) < 1e-14);
    for (double k : {0.5, 2.0, 2.83, 4.0, 6.0}) {
        const auto z = beta_constants({k, 0.0}, c);
        CHECK(std::abs(z.beta_plus - z.beta_minus) < 1e-12);
        CHECK(std::abs(z.beta_plus - z.beta_hat) < 1e-12);
        CHECK(std::abs(z.eta) < 1e-12);
    }
}

TEST_CASE("beta_e agrees with brute-force partial sums", "[greens][property]") {
    const PhysicalConfig c = figure_config();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> Q(-0.5, 0.5), K(0.3, 5.5);
    for (int i = 0; i < 5; ++i) {
        const double kappa = Q(rng), k = K(rng);
        if (!in_diamond({k, kappa}, c)) continue;
        const cplx fast = beta_constants({k, kappa}, c).beta_e;
        const cplx slow = beta_e_oracle(k, kappa, c, 1000000);
        INFO("k = " << k << ", kappa = " << kappa);
        CHECK(std::abs(fast - slow) < 1e-8);
    }
}

TEST_CASE("beta cross constants agree with averaged partial sums", "[greens][property]") {
    const PhysicalConfig c = figure_config();
    for (auto [k, kappa] : {std::pair{2.0, 0.1}, std::pair{2.83, -0.2}, std::pair{4.5, 0.3}}) {
        const auto b = beta_constants({k, kappa}, c);
        // partial sums of an oscillating 1/n series: average two consecutive cut-offs
        auto partial = [&](int sign, long M) {
            cplx s = 0.0;
            for (long n = -M; n <= M; ++n) {
                const double q = kappa + 2.0 * pi * n / c.d;
                s += std::exp(I * (sign * q * c.d0)) / zeta_oracle(k, q);
            }
            return -I / c.d * s;
        };
        const long M = 200000;
        for (int sign : {1, -1}) {
            const cplx ref = 0.5 * (partial(sign, M) + partial(sign, M + 1));
            CHECK(std::abs((sign > 0 ? b.beta_plus : b.beta_minus) - ref) < 1e-5);
        }
    }
}

TEST_CASE("imaginary parts of the constants", "[greens][property]") {
    const PhysicalConfig c = figure_config();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> K(0.2, 2.0 * pi - 0.2), Q(-0.4, 0.4);
    for (int i = 0; i < 10; ++i) {
        const double k = K(rng);
        if (std::abs(std::sin(k)) < 1e-3) continue;
        const auto b = beta_constants({k, 0.0}, c);
        const double z0 = zeta(0, {k, 0.0}, c).real();
        CHECK_THAT((b.gamma + b.beta_hat).imag(), WithinAbs(-2.0 / (c.d * z0), 1e-10));
        CHECK_THAT((b.gamma - b.beta_hat).imag(), WithinAbs(0.0, 1e-10));
    }
    for (int i = 0; i < 10; ++i) {
        const double kappa = Q(rng), k = K(rng);
        if (!in_diamond({k, kappa}, c) || std::abs(std::sin(k)) < 1e-3) continue;
        const auto b = beta_constants({k, kappa}, c);
        const double z0 = zeta(0, {k, kappa}, c).real();
        CHECK_THAT(b.beta.imag() - 0.5 * (b.beta_plus + b.beta_minus).imag(),
                   WithinAbs((std::cos(kappa * c.d0) - 1.0) / (z0 * c.d), 1e-10));
    }
}

TEST_CASE("eta vanishes linearly in kappa", "[greens]") {
    const PhysicalConfig c = figure_config();
    const double e1 = std::abs(beta_constants({2.83, 0.1}, c).eta);
    const double e2 = std::abs(beta_constants({2.83, 0.05}, c).eta);
    const double ratio = (e1 / e2) / 2.0;
    INFO("|eta(0.1)| = " << e1 << ", |eta(0.05)| = " << e2);
    CHECK(ratio > 0.25);
    CHECK(ratio < 4.0);
    CHECK(e1 / 0.1 < 10.0);
}

TEST_CASE("beta constants extend to complex k", "[greens]") {
    const PhysicalConfig c = figure_config();
    // analytic: Cauchy-Riemann against a small complex step
    const cplx k0(2.9, -0.15);
    const double h = 1e-6;
    auto f = [&](cplx k) { return beta_constants({k, 0.1}, c).beta; };
    const cplx dx = (f(k0 + h) - f(k0 - h)) / (2.0 * h);
    const cplx dy = (f(k0 + I * h) - f(k0 - I * h)) / (2.0 * I * h);
    CHECK(std::abs(dx - dy) < 1e-5 * std::abs(dx));
}

TEST_CASE("beta constants are safe to call concurrently", "[greens]") {
    const PhysicalConfig c = figure_config();
    std::vector<cplx> serial, parallel(8);
    for (int i = 0; i < 8; ++i) serial.push_back(beta_constants({1.0 + 0.5 * i, 0.1}, c).beta);
    std::vector<std::thread> ts;
    for (int i = 0; i < 8; ++i) ts.emplace_back([&, i] { parallel[i] = beta_constants({1.0 + 0.5 * i, 0.1}, c).beta; });
    for (auto& t : ts) t.join();
    CHECK(serial == parallel);
}
