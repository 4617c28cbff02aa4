#include "slitfano/resonance.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "slitfano/parallel.hpp"

namespace slitfano {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kStepTol = 1e-12;
constexpr int kMaxIterations = 100;
constexpr int kMaxEdgePoints = 2048;

// Does the segment a -> b cross the cut of sqrt(k^2 - c^2), i.e. the set where k^2 - c^2 is negative imaginary?
bool crosses_cut(cplx a, cplx b, double c) {
    const cplx wa = a * a - c * c, wb = b * b - c * c;
    if ((wa.real() > 0.0) == (wb.real() > 0.0)) return false;
    const double t = wa.real() / (wa.real() - wb.real());
    const cplx k = a + t * (b - a);
    return (k * k - c * c).imag() < 0.0;
}

struct Winding {
    double value = 0.0;
    double min_abs = 0.0, mean_abs = 0.0; // |f| over the nodes
};

Winding winding(const ComplexFn& f, const Box& box, int n, const std::vector<double>& branch_points) {
    const double w = box.half_width, h = box.half_height;
    const cplx c = box.center;
    const cplx corner[5] = {c + cplx(-w, -h), c + cplx(w, -h), c + cplx(w, h), c + cplx(-w, h), c + cplx(-w, -h)};
    cplx total = 0.0;
    Winding out;
    out.min_abs = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 4; ++e) {
        const cplx a = corner[e], b = corner[e + 1];
        if (std::abs(f(a)) < 1e-14) throw Error(ErrorKind::ContourThroughZero, "function vanishes at a box corner");
        for (double bp : branch_points)
            if (crosses_cut(a, b, bp)) throw Error(ErrorKind::BranchCut, "contour crosses a Rayleigh branch cut");
        const cplx dk = (b - a) / double(n);
        const cplx hd = 1e-6 * (b - a) / std::abs(b - a);
        for (int i = 0; i < n; ++i) {
            // midpoint nodes: the trapezoid rule for the closed periodic contour
            const cplx k = a + (i + 0.5) * dk;
            const cplx v = f(k);
            if (std::abs(v) < 1e-14) throw Error(ErrorKind::ContourThroughZero, "function vanishes on the contour");
            out.min_abs = std::min(out.min_abs, std::abs(v));
            out.mean_abs += std::abs(v) / (4.0 * n);
            const cplx dv = (f(k + hd) - f(k - hd)) / (2.0 * hd);
            total += dv / v * dk;
        }
    }
    out.value = (total / (2.0 * pi * I)).real();
    return out;
}

} // namespace

RootCount count_roots(const ComplexFn& f, const Box& box, int quad_points, const std::vector<double>& branch_points) {
    if (quad_points < 4) quad_points = 4;
    int n = quad_points;
    double prev = winding(f, box, n, branch_points).value;
    Winding cur;
    for (n *= 2; n <= kMaxEdgePoints; n *= 2) {
        cur = winding(f, box, n, branch_points);
        const double r = std::round(cur.value);
        if (std::abs(cur.value - r) < 0.25 && std::abs(prev - r) < 0.25) return {static_cast<int>(r), cur.value, n};
        prev = cur.value;
    }
    // a zero on (or within a node spacing of) the contour keeps the estimate from settling
    if (cur.min_abs < 1e-3 * cur.mean_abs)
        throw Error(ErrorKind::ContourThroughZero, "function nearly vanishes on the contour");
    throw Error(ErrorKind::QuadratureFailure, "winding number did not settle");
}

RefineResult refine_root(const ComplexFn& f, cplx seed, const Box& region, double step) {
    RefineResult out;
    cplx x2 = seed, f2 = f(x2);
    if (std::abs(f2) == 0.0) return {seed, 0, 0.0};
    cplx x0 = seed - step, x1 = seed + step;
    cplx f0 = f(x0), f1 = f(x1);
    for (int it = 1; it <= kMaxIterations; ++it) {
        // Muller step through (x0, f0), (x1, f1), (x2, f2)
        const cplx h1 = x1 - x0, h2 = x2 - x1;
        const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
        const cplx a = (d2 - d1) / (h2 + h1);
        const cplx b = a * h2 + d2;
        const cplx disc = std::sqrt(b * b - 4.0 * f2 * a);
        const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
        const cplx dx = den == 0.0 ? cplx(step) : -2.0 * f2 / den;
        const cplx x3 = x2 + dx;
        if (!region.contains(x3)) throw Error(ErrorKind::EscapedRegion, "iterate left the search box");
        const cplx f3 = f(x3);
        x0 = x1, f0 = f1, x1 = x2, f1 = f2, x2 = x3, f2 = f3;
        out.k = x3;
        out.iterations = it;
        out.residual = std::abs(f3);
        if (out.residual == 0.0 || (out.residual < kResidualTol && std::abs(dx) < kStepTol)) return out;
    }
    std::ostringstream msg;
    msg << "Muller iteration stalled at k = " << out.k << " with |f| = " << out.residual;
    throw Error(ErrorKind::NoConvergence, msg.str());
}

const char* to_string(Family f) { return f == Family::FabryPerot ? "FabryPerot" : "Embedded"; }

const char* to_string(RootMethod m) {
    switch (m) {
    case RootMethod::asymptotic: return "asymptotic";
    case RootMethod::numeric_hat: return "numeric_hat";
    case RootMethod::numeric_full: return "numeric_full";
    }
    return "?";
}

LambdaFunction::LambdaFunction(const PhysicalConfig& cfg, double kappa, double alpha)
    : cfg_(cfg), kappa_(kappa), alpha_(alpha) {}

LambdaFunction::LambdaFunction(std::shared_ptr<const FullModel> model)
    : cfg_(model->discretization().config()), kappa_(model->discretization().kappa()), model_(std::move(model)) {}

cplx LambdaFunction::operator()(cplx k, int j, int parity) const {
    if (model_) return model_->lambda(k, j, parity);
    return lambda_hat(beta_constants(SpectralPoint{k, kappa_}, cfg_), cfg_.eps, alpha_, j, parity);
}

cplx LambdaFunction::regularized(cplx k, int j, int parity) const {
    return (*this)(k, j, parity) * (parity > 0 ? std::sin(0.5 * k) : std::cos(0.5 * k));
}

std::vector<double> rayleigh_branch_points(const PhysicalConfig& cfg, double kappa, double k_max) {
    std::vector<double> out;
    const double a = 2.0 * pi / cfg.d;
    for (int n = -8; n <= 8; ++n) {
        const double c = std::abs(kappa + a * n);
        if (c <= k_max) out.push_back(c);
    }
    return out;
}

double verification_half_width(double eps) {
    return std::min(std::max(20.0 * eps * std::abs(std::log(eps)), 0.05), 0.25);
}

std::vector<ResonanceBranch> predicted_resonances(const PhysicalConfig& cfg, double kappa, int m_max, double alpha) {
    std::vector<ResonanceBranch> out;
    for (int m = 1; m <= m_max; ++m) {
        const auto p = resonance_prediction(m, kappa, cfg, alpha);
        for (Family fam : {Family::FabryPerot, Family::Embedded}) {
            ResonanceBranch b;
            b.m = m;
            b.family = fam;
            b.parity = m % 2 ? 1 : -1;
            b.k = fam == Family::FabryPerot ? p.k_fabry_perot : p.k_embedded;
            b.kappa = kappa;
            b.eps = cfg.eps;
            b.method = RootMethod::asymptotic;
            out.push_back(b);
        }
    }
    return out;
}

std::vector<ResonanceBranch> find_resonances(const PhysicalConfig& cfg, double kappa, int m_max, bool use_full,
                                             const ResonanceSearch& opts) {
    if (m_max < 1 || !(m_max < 2.0 / cfg.d)) throw Error(ErrorKind::OutsideValidRegion, "need 1 <= m_max < 2/d");
    const double alpha = opts.alpha != 0.0 ? opts.alpha : default_alpha();
    std::vector<ResonanceBranch> rows = predicted_resonances(cfg, kappa, m_max, alpha);
    std::unique_ptr<LambdaFunction> lam;
    if (use_full)
        lam = std::make_unique<LambdaFunction>(std::make_shared<const FullModel>(cfg, kappa, opts.N));
    else
        lam = std::make_unique<LambdaFunction>(cfg, kappa, alpha);
    const double hw = verification_half_width(cfg.eps);

    parallel_for(
        rows.size(),
        [&](std::size_t i) {
            ResonanceBranch& b = rows[i];
            const int j = b.family == Family::FabryPerot ? 1 : 2;
            const int parity = b.parity;
            auto f = [&](cplx k) { return (*lam)(k, j, parity); };
            const Box search{b.k, 0.5, 0.5};
            const auto r = refine_root(f, b.k, search);
            b.k = r.k;
            b.residual = r.residual;
            b.method = use_full ? RootMethod::numeric_full : RootMethod::numeric_hat;
            if (opts.verify) {
                const Box box{r.k, hw, hw};
                auto g = [&](cplx k) { return lam->regularized(k, j, parity); };
                const auto bp = rayleigh_branch_points(cfg, kappa, std::abs(r.k) + 2.0 * hw);
                b.count = count_roots(g, box, 32, bp).count;
                if (b.count != 1) {
                    std::ostringstream msg;
                    msg << "m = " << b.m << ", " << to_string(b.family) << ": " << b.count
                        << " roots counted around k = " << r.k;
                    throw Error(ErrorKind::RootCountMismatch, msg.str());
                }
            }
        },
        opts.threads);
    return rows;
}

} // namespace slitfano
