#include <catch_amalgamated.hpp>

#include <random>

#include "slitfano/bie.hpp"

using namespace slitfano;

namespace {

PhysicalConfig figure_config(double eps = 0.05) { return PhysicalConfig{1.0, 0.4, eps}; }

galerkin::RMat parity_flip(int n) {
    galerkin::RMat J = galerkin::RMat::Zero(n, n);
    for (int j = 0; j < n; ++j) J(j, j) = (j % 2) ? -1.0 : 1.0;
    return J;
}

double imag_norm(const CMat& m) { return m.imag().norm(); }

} // namespace

TEST_CASE("static kernel matrix", "[bie]") {
    const RMat S = single_layer_matrix(32);
    CHECK((S - S.transpose()).norm() < 1e-12 * S.norm());
    // the kernel is even under (X, Y) -> (-X, -Y)
    const RMat J = parity_flip(32);
    CHECK((J * S * J - S).norm() < 1e-12 * S.norm());
    // the constant kernel is rank one
    Eigen::JacobiSVD<RMat> svd(galerkin::constant_kernel(32));
    CHECK(svd.singularValues()(0) == Catch::Approx(pi * pi));
    CHECK(svd.singularValues()(1) < 1e-14);
}

TEST_CASE("blocks are real at kappa = 0", "[bie]") {
    const Discretization D(figure_config(), 0.0, 32);
    for (auto kind : {BlockKind::S, BlockKind::S_inf, BlockKind::S_tilde_inf, BlockKind::Ti})
        CHECK(imag_norm(D.block(2.0, kind).entries) <= 1e-12 * std::max(1.0, D.block(2.0, kind).entries.norm()));
    // Te itself carries the radiating -i/(d zeta_0) term; its remainder after beta P does not
    const auto Te = D.block(2.0, BlockKind::Te).entries;
    CHECK(Te.imag().norm() > 1e-3);
}

TEST_CASE("blocks satisfy reciprocity", "[bie]") {
    const Discretization D0(figure_config(), 0.0, 32);
    for (auto kind : {BlockKind::Te, BlockKind::Ti, BlockKind::Ti_tilde, BlockKind::S, BlockKind::S_inf}) {
        const CMat m = D0.block(2.0, kind).entries;
        CHECK((m - m.transpose()).norm() < 1e-11 * std::max(1.0, m.norm()));
    }
    // G(x, y; kappa) = G(y, x; -kappa)
    const Discretization Dp(figure_config(), 0.1, 32), Dm(figure_config(), -0.1, 32);
    const auto bp = Dp.blocks(2.0), bm = Dm.blocks(2.0);
    CHECK((bp.same.transpose() - bm.same).norm() < 1e-11 * bp.same.norm());
    CHECK((bp.plus.transpose() - bm.minus).norm() < 1e-11 * bp.plus.norm());
    CHECK((bp.same - bp.same.transpose()).norm() > 1e-4);
}

TEST_CASE("mirror relation at kappa = 0", "[bie]") {
    const Discretization D(figure_config(), 0.0, 32);
    const RMat J = parity_flip(32);
    const auto b = D.blocks(2.0);
    // reflection x1 -> -x1 swaps the slits and flips X within each one
    CHECK((J * b.plus * J - b.minus).norm() < 1e-12 * b.plus.norm());
    CHECK((J * b.same * J - b.same).norm() < 1e-12 * b.same.norm());
    CHECK((b.plus - b.minus).norm() > 1e-3);
    const auto r = D.solve(2.0);
    CHECK((r.densities.phi1_plus - J * r.densities.phi1_minus).norm() < 1e-10);
    CHECK((r.densities.phi2_plus - J * r.densities.phi2_minus).norm() < 1e-10);
}

TEST_CASE("remainder blocks scale with eps", "[bie]") {
    auto norms = [](double eps) {
        const Discretization D(figure_config(eps), 0.1, 32);
        return std::array<double, 3>{D.block(2.0, BlockKind::S_inf).entries.norm(),
                                     D.block(2.0, BlockKind::S_inf_plus).entries.norm(),
                                     D.block(2.0, BlockKind::S_tilde_inf).entries.norm()};
    };
    const auto a = norms(0.05), b = norms(0.025);
    for (int i = 0; i < 2; ++i) {
        INFO("block " << i << ": " << a[i] << " vs " << b[i]);
        CHECK(a[i] / b[i] > 1.5);
        CHECK(a[i] / b[i] < 2.5);
    }
    // Ti_tilde is beta~ P up to terms of order exp(-pi / eps)
    CHECK(a[2] < 1e-20);
    CHECK(b[2] < a[2]);
}

TEST_CASE("direct solve at the reference point", "[bie]") {
    const Discretization D(figure_config(), 0.1, 48);
    const auto r = D.solve(2.0);
    CHECK(r.coefficients.energy_residual < 1e-10);
    CHECK_FALSE(r.near_singular);
    CHECK(std::isfinite(r.condition_estimate));
    // averages are pi c0 for each density
    CHECK(std::abs(r.densities.averages[1] - pi * r.densities.phi1_plus(0)) < 1e-14);
}

TEST_CASE("even/odd split reproduces the full system", "[bie]") {
    for (double kappa : {0.0, 0.1, -0.2}) {
        const Discretization D(figure_config(), kappa, 32);
        for (double k : {1.3, 2.0, 2.83}) {
            const auto a = D.solve(k), b = D.solve_even_odd(k);
            CHECK(std::abs(a.coefficients.T - b.coefficients.T) < 1e-10);
            CHECK(std::abs(a.coefficients.R - b.coefficients.R) < 1e-10);
            CHECK((a.densities.phi2_minus - b.densities.phi2_minus).norm() < 1e-10 * (1.0 + a.densities.phi2_minus.norm()));
        }
    }
}

TEST_CASE("self-convergence in N", "[bie]") {
    const auto a = solve_scattering({2.0, 0.1}, figure_config(), 32);
    const auto b = solve_scattering({2.0, 0.1}, figure_config(), 64);
    CHECK(std::abs(a.coefficients.T - b.coefficients.T) <= 1e-8);
    CHECK(std::abs(a.coefficients.R - b.coefficients.R) <= 1e-8);
}

TEST_CASE("energy balance at random points", "[bie][property]") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> K(0.3, 6.0), Q(-0.3, 0.3), E(0.02, 0.08);
    int tried = 0;
    while (tried < 12) {
        const double k = K(rng), kappa = Q(rng), eps = E(rng);
        const PhysicalConfig c = figure_config(eps);
        if (!in_diamond({k, kappa}, c) || std::abs(std::sin(k)) < 1e-2) continue;
        if (std::abs(k - std::abs(kappa_n(1, kappa, c))) < 1e-2 || std::abs(k - std::abs(kappa_n(-1, kappa, c))) < 1e-2)
            continue;
        ++tried;
        const auto r = solve_scattering({k, kappa}, c, 32);
        INFO("k = " << k << ", kappa = " << kappa << ", eps = " << eps);
        CHECK(r.coefficients.energy_residual < 1e-10);
    }
}

TEST_CASE("slit field", "[bie]") {
    const PhysicalConfig c = figure_config();
    const SpectralPoint pt{2.0, 0.1};
    const auto r = solve_scattering(pt, c, 32);
    SECTION("satisfies the Helmholtz equation inside the slit") {
        const double h = 2e-3;
        for (double x2 : {0.3, 0.5, 0.7})
            for (double x1 : {c.d0 / 2, c.d0 / 2 + 0.01, -c.d0 / 2 - 0.008}) {
                auto u = [&](double a, double b) { return slit_field(pt, c, r.densities, Point{a, b}); };
                const cplx lap = (u(x1 + h, x2) + u(x1 - h, x2) + u(x1, x2 + h) + u(x1, x2 - h) - 4.0 * u(x1, x2)) / (h * h);
                const cplx res = lap + 4.0 * u(x1, x2);
                CHECK(std::abs(res) < 1e-4 * (1.0 + std::abs(u(x1, x2))));
            }
    }
    SECTION("is mirror symmetric at kappa = 0") {
        const auto r0 = solve_scattering({2.0, 0.0}, c, 32);
        for (double x2 : {0.25, 0.5, 0.75})
            for (double x : {0.0, 0.01, -0.02}) {
                const cplx a = slit_field({2.0, 0.0}, c, r0.densities, Point{c.d0 / 2 + x, x2});
                const cplx b = slit_field({2.0, 0.0}, c, r0.densities, Point{-c.d0 / 2 - x, x2});
                CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
            }
    }
    SECTION("higher modal amplitudes decay") {
        for (int m : {1, 2, 4, 8, 16}) {
            const auto a = modal_coefficients(cplx(2.0), c, r.densities, 1, m);
            CHECK(std::abs(a[0]) * std::sqrt(double(m)) < 0.1);
            CHECK(std::abs(a[1]) * std::sqrt(double(m)) < 0.1);
        }
    }
    SECTION("rejects points outside the slits") {
        CHECK_THROWS_AS(slit_field(pt, c, r.densities, Point{0.0, 0.5}), Error);
    }
}
