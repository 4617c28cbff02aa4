#include "slitfano/selfcheck.hpp"

#include <cmath>
#include <functional>

#include "slitfano/resonance.hpp"

namespace slitfano {

std::vector<CheckResult> run_selfcheck(const RunConfig& rc) {
    std::vector<CheckResult> out;
    const double scale = rc.tol_scale;
    const Tolerances& tol = rc.tol;
    PhysicalConfig geo = rc.geometry;

    auto check = [&](const std::string& name, double tolerance, const std::function<double()>& deviation) {
        CheckResult r;
        r.name = name;
        r.tolerance = tolerance * scale;
        try {
            r.value = deviation();
            r.pass = r.value <= r.tolerance;
        } catch (const std::exception& e) {
            r.error = e.what();
            r.pass = false;
        }
        out.push_back(r);
    };

    PhysicalConfig unit = geo;
    unit.d = 1.0;
    check("zeta_0_at_pi", 1e-14, [&] { return std::abs(zeta(0, {pi, 0.0}, unit) - pi); });
    check("zeta_1_evanescent", 1e-12,
          [&] { return std::abs(zeta(1, {pi, 0.0}, unit) - I * (pi * std::sqrt(3.0))); });
    check("diamond_excludes_k0", 0.0, [&] { return in_diamond({0.0, 0.0}, unit) ? 1.0 : 0.0; });
    check("beta_i_at_half_pi", 1e-12, [&] {
        const auto b = beta_constants({pi / 2, 0.0}, geo, tol);
        return std::abs(b.beta_i - 2.0 * std::log(2.0) / pi);
    });
    check("beta_plus_minus_hat_at_kappa0", 1e-12, [&] {
        const auto b = beta_constants({rc.k, 0.0}, geo, tol);
        return std::max({std::abs(b.beta_plus - b.beta_minus), std::abs(b.beta_plus - b.beta_hat)});
    });
    check("cross_kernel_swap_at_kappa0", 1e-12, [&] {
        double dev = 0.0;
        for (double X : {-0.4, 0.1, 0.3})
            for (double Y : {-0.2, 0.25})
                dev = std::max(dev, std::abs(exterior_kernel({rc.k, 0.0}, geo, X, Y, ExteriorKind::cross_plus, tol) -
                                             exterior_kernel({rc.k, 0.0}, geo, Y, X, ExteriorKind::cross_minus, tol)));
        return dev;
    });
    check("static_kernel_symmetric", 1e-12, [&] {
        const auto S = single_layer_matrix(16);
        return (S - S.transpose()).cwiseAbs().maxCoeff();
    });
    check("constant_kernel_rank_one", 1e-12, [&] {
        const auto P = galerkin::constant_kernel(8);
        RMat E = RMat::Zero(8, 8);
        E(0, 0) = pi * pi;
        return (P - E).cwiseAbs().maxCoeff();
    });
    check("mu_at_kappa0", 1e-14, [&] {
        LambdaSet L;
        L.lambda = {cplx(1.0), cplx(2.0), cplx(3.0), cplx(4.0)};
        const auto c = mu_lambda_coeffs(cplx(0.0), 0.0, geo, L);
        return std::max(std::abs(c.mu_plus - 2.0), std::abs(c.mu_minus));
    });
    check("equal_lambdas_channel", 1e-14, [&] {
        LambdaSet L;
        L.lambda = {cplx(0.5, -0.1), cplx(2.0), cplx(0.5, -0.1), cplx(4.0)};
        const auto c = mu_lambda_coeffs(cplx(0.0), 0.0, geo, L);
        return std::max(std::abs(c.Lambda1_plus - 2.0 / L.lambda[0]), std::abs(c.Lambda1_minus));
    });
    check("channels_symmetric_at_kappa0", 1e-12, [&] {
        const auto L = lambdas_hat({rc.k, 0.0}, geo, default_alpha());
        const auto c = mu_lambda_coeffs({rc.k, 0.0}, geo, L);
        return std::max(std::abs(c.r_minus - c.r_plus), std::abs(c.t_minus - c.t_plus));
    });
    check("triple_root_count", 0.0, [&] {
        const cplx c(1.0, -0.2);
        const auto n = count_roots([&](cplx k) { return (k - c) * (k - c) * (k - c); }, Box{cplx(1.1, -0.1), 0.5, 0.5});
        return std::abs(n.count - 3.0);
    });
    check("muller_exact_seed", 0.0, [&] {
        const auto r = refine_root([](cplx k) { return (k - 2.0) * (k + 1.0); }, cplx(2.0), Box{cplx(2.0), 1.0, 1.0});
        return r.iterations <= 3 ? 0.0 : double(r.iterations);
    });
    check("predictions_tend_to_pi", 1e-2, [&] {
        PhysicalConfig tiny = geo;
        tiny.eps = 1e-5;
        const auto p = resonance_prediction(1, 0.0, tiny, default_alpha());
        return std::max(std::abs(p.k_fabry_perot - pi), std::abs(p.k_embedded - pi));
    });
    check("energy_at_k", 1e-6, [&] {
        const Discretization disc(geo, rc.kappa, 32, tol);
        return disc.solve(rc.k).coefficients.energy_residual;
    });
    return out;
}

} // namespace slitfano
