#include "slitfano/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slitfano/parallel.hpp"

namespace slitfano {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LambdaSet asymptotic_lambdas(const SpectrumSolver& s, double k) {
    if (s.options().asymptotic_lambdas == LambdaVariant::full) return s.model()->lambdas(cplx(k), s.alpha());
    return lambdas_hat(SpectralPoint{cplx(k), s.kappa()}, s.config(), s.alpha());
}

std::vector<double> valid_probes(const PhysicalConfig& cfg) {
    std::vector<double> out;
    for (double x2 : kSlitProbes)
        if (x2 >= 5.0 * cfg.eps && x2 <= 1.0 - 5.0 * cfg.eps) out.push_back(x2);
    if (out.empty()) throw Error(ErrorKind::OutsideValidRegion, "no midline probe is clear of the apertures");
    return out;
}

// Golden-section search for a minimum of g on [a, b].
double golden_min(const std::function<double(double)>& g, double a, double b, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > tol) {
        if (gc < gd) {
            b = d, d = c, gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c, c = d, gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

const char* to_string(Source s) { return s == Source::direct ? "direct" : "asymptotic"; }

SpectrumSolver::SpectrumSolver(const PhysicalConfig& cfg, double kappa, const SpectrumOptions& opts)
    : cfg_(cfg), kappa_(kappa), opts_(opts) {
    cfg_.validate();
    alpha_ = opts.alpha != 0.0 ? opts.alpha : default_alpha();
    disc_ = std::make_shared<const Discretization>(cfg_, kappa_, opts_.N, opts_.tol);
    model_ = std::make_shared<const FullModel>(disc_);
}

std::vector<cplx> SpectrumSolver::slit_profile(double k, const ApertureDensities& dens, int sign,
                                               const std::vector<double>& x2) const {
    std::vector<cplx> out;
    out.reserve(x2.size());
    for (double y : x2)
        out.push_back(slit_field(SpectralPoint{cplx(k), kappa_}, cfg_, dens, Point{sign * 0.5 * cfg_.d0, y}));
    return out;
}

double SpectrumSolver::max_slit_amplitude(double k, const ApertureDensities& dens) const {
    const auto probes = valid_probes(cfg_);
    double amp = 0.0;
    for (int sign : {-1, 1})
        for (cplx u : slit_profile(k, dens, sign, probes)) amp = std::max(amp, std::abs(u));
    return amp;
}

SpectrumRow SpectrumSolver::row(double k, Source source) const {
    SpectrumRow r;
    r.k = k;
    r.source = source;
    if (!in_diamond(SpectralPoint{cplx(k), kappa_}, cfg_)) {
        std::ostringstream msg;
        msg << "k = " << k << " is outside the single-mode region for kappa = " << kappa_;
        throw Error(ErrorKind::OutsideValidRegion, msg.str());
    }
    if (source == Source::direct) {
        const auto s = disc_->solve(k);
        r.R = s.coefficients.R;
        r.T = s.coefficients.T;
        r.energy_residual = s.coefficients.energy_residual;
        r.max_slit_amp = max_slit_amplitude(k, s.densities);
    } else {
        const SpectralPoint pt{cplx(k), kappa_};
        const auto L = asymptotic_lambdas(*this, k);
        const auto c = rt_asymptotic(pt, cfg_, L, alpha_);
        r.R = c.R;
        r.T = c.T;
        r.energy_residual = c.energy_residual;
        double amp = 0.0;
        for (int sign : {-1, 1})
            for (double x2 : valid_probes(cfg_))
                amp = std::max(amp, std::abs(slit_field_asymptotic(pt, cfg_, L, alpha_, x2, sign)));
        r.max_slit_amp = amp;
    }
    r.T_abs = std::abs(r.T);
    r.R_abs = std::abs(r.R);
    r.T_arg = std::arg(r.T);
    return r;
}

std::vector<SpectrumRow> sweep(const SpectrumSolver& solver, const std::vector<double>& k_grid, Source source) {
    std::vector<SpectrumRow> rows(k_grid.size());
    parallel_for(
        k_grid.size(),
        [&](std::size_t i) {
            try {
                rows[i] = solver.row(k_grid[i], source);
            } catch (const Error& e) {
                SpectrumRow& r = rows[i];
                r = SpectrumRow{};
                r.k = k_grid[i];
                r.source = source;
                r.T_abs = r.R_abs = r.T_arg = r.energy_residual = r.max_slit_amp = kNaN;
                r.T = r.R = cplx(kNaN, kNaN);
                r.error_flag = to_string(e.kind());
            }
        },
        solver.options().threads);
    return rows;
}

std::vector<SpectrumRow> sweep(const PhysicalConfig& cfg, double kappa, const std::vector<double>& k_grid,
                               Source source, const SpectrumOptions& opts) {
    return sweep(SpectrumSolver(cfg, kappa, opts), k_grid, source);
}

std::vector<double> adaptive_grid(double lo, double hi, const std::vector<double>& centers, double half_width,
                                  double density, int refine) {
    if (!(hi > lo) || !(density > 0.0) || refine < 1)
        throw Error(ErrorKind::InvalidArgument, "adaptive_grid needs lo < hi, density > 0, refine >= 1");
    std::vector<double> out;
    auto fill = [&](double a, double b, double per_unit) {
        a = std::max(a, lo), b = std::min(b, hi);
        if (!(b > a)) return;
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) * per_unit)));
        for (int i = 0; i <= n; ++i) out.push_back(a + (b - a) * i / n);
    };
    fill(lo, hi, density);
    for (double c : centers) fill(c - half_width, c + half_width, density * refine);
    std::sort(out.begin(), out.end());
    const double tol = 1e-14 * std::max(1.0, std::abs(hi));
    out.erase(std::unique(out.begin(), out.end(), [&](double a, double b) { return b - a < tol; }), out.end());
    return out;
}

FanoFeature detect_fano(const SpectrumSolver& solver, const ResonanceBranch& branch, const FanoOptions& opts) {
    const double eps = solver.config().eps, kappa = solver.kappa();
    if (kappa == 0.0) throw Error(ErrorKind::InvalidArgument, "no Fano feature at kappa = 0");
    const double dip_max = opts.dip_threshold > 0.0 ? opts.dip_threshold : 10.0 * eps;
    const double peak_min = opts.peak_threshold > 0.0 ? opts.peak_threshold : 1.0 - 10.0 * eps;
    const double k_star = branch.k.real();
    const double width = std::abs(branch.k.imag());
    const double unit = kappa * kappa * eps;
    auto absT = [&](double k) { return std::abs(solver.transmission(k)); };

    FanoFeature best;
    best.k_star = k_star;
    best.T_dip = std::numeric_limits<double>::infinity();
    best.T_peak = -1.0;
    for (double c = 1.0; c <= opts.max_c; c *= 2.0) {
        const double hw = c * unit;
        std::vector<double> ks;
        for (int i = 0; i < opts.scan_points; ++i) ks.push_back(k_star - hw + 2.0 * hw * i / (opts.scan_points - 1));
        // the resonance can be far narrower than the window
        const double rw = std::min(20.0 * width, hw);
        if (rw > 0.0)
            for (int i = 0; i < opts.resonance_points; ++i)
                ks.push_back(k_star - rw + 2.0 * rw * i / (opts.resonance_points - 1));
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

        std::vector<cplx> T(ks.size());
        parallel_for(ks.size(), [&](std::size_t i) { T[i] = solver.transmission(ks[i]); },
                     solver.options().threads);
        std::size_t imin = 0, imax = 0;
        for (std::size_t i = 1; i < ks.size(); ++i) {
            if (std::abs(T[i]) < std::abs(T[imin])) imin = i;
            if (std::abs(T[i]) > std::abs(T[imax])) imax = i;
        }
        FanoFeature f;
        f.k_star = k_star;
        f.window_c = c;
        f.half_width = hw;
        f.k_dip = ks[imin], f.T_dip = std::abs(T[imin]);
        f.k_peak = ks[imax], f.T_peak = std::abs(T[imax]);
        for (std::size_t i = 0; i < ks.size(); ++i) f.samples.push_back({ks[i], T[i]});
        if (f.T_dip < best.T_dip) best.k_dip = f.k_dip, best.T_dip = f.T_dip;
        if (f.T_peak > best.T_peak) best.k_peak = f.k_peak, best.T_peak = f.T_peak;
        best.window_c = c, best.half_width = hw;

        const bool interior = imin > 0 && imin + 1 < ks.size() && imax > 0 && imax + 1 < ks.size();
        if (!interior || f.T_dip > dip_max || f.T_peak < peak_min) continue;

        double tol = unit / 100.0;
        if (width > 0.0) tol = std::min(tol, width / 100.0);
        tol = std::max(tol, 4e-15 * k_star);
        f.k_dip = golden_min(absT, ks[imin - 1], ks[imin + 1], tol);
        f.T_dip = std::min(f.T_dip, absT(f.k_dip));
        f.k_peak = golden_min([&](double k) { return -absT(k); }, ks[imax - 1], ks[imax + 1], tol);
        f.T_peak = std::max(f.T_peak, absT(f.k_peak));
        return f;
    }
    std::ostringstream msg;
    msg << "no dip <= " << dip_max << " and peak >= " << peak_min << " near k = " << k_star
        << "; best |T| range [" << best.T_dip << ", " << best.T_peak << "]";
    throw FeatureNotFound(msg.str(), best);
}

FanoFeature detect_fano(const PhysicalConfig& cfg, double kappa, const ResonanceBranch& branch,
                        const SpectrumOptions& sopts, const FanoOptions& opts) {
    return detect_fano(SpectrumSolver(cfg, kappa, sopts), branch, opts);
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "fit needs two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "log-log fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        sx += lx.back(), sy += ly.back(), sxx += lx.back() * lx.back(), sxy += lx.back() * ly.back();
    }
    SlopeFit f;
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw Error(ErrorKind::InvalidArgument, "degenerate abscissae");
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double mean = sy / n;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (f.intercept + f.slope * lx[i]);
        ss_res += e * e;
        ss_tot += (ly[i] - mean) * (ly[i] - mean);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

double shape_overlap(double k, int m, const std::vector<double>& x2, const std::vector<cplx>& u) {
    cplx dot = 0.0;
    double nu = 0.0, ns = 0.0;
    for (std::size_t i = 0; i < x2.size(); ++i) {
        const double s = m % 2 ? std::cos(k * (x2[i] - 0.5)) : std::sin(k * (x2[i] - 0.5));
        dot += u[i] * s;
        nu += std::norm(u[i]);
        ns += s * s;
    }
    return std::abs(dot) / std::sqrt(nu * ns);
}

EnhancementPoint enhancement_point(const PhysicalConfig& cfg, double kappa, Family family,
                                   const SpectrumOptions& opts) {
    const SpectrumSolver solver(cfg, kappa, opts);
    const auto rows = predicted_resonances(cfg, kappa, 1, solver.alpha());
    const auto& seed = family == Family::FabryPerot ? rows[0] : rows[1];
    const int j = family == Family::FabryPerot ? 1 : 2;
    const LambdaFunction lam(solver.model());
    const auto root = refine_root([&](cplx k) { return lam(k, j, seed.parity); }, seed.k, Box{seed.k, 0.5, 0.5});

    EnhancementPoint p;
    p.kappa = kappa;
    p.eps = cfg.eps;
    p.k = root.k.real();
    p.im_k = root.k.imag();
    const auto s = solver.solve(p.k);
    p.T_abs = std::abs(s.coefficients.T);
    p.amplitude = solver.max_slit_amplitude(p.k, s.densities);
    p.prefactor = p.amplitude * cfg.eps * (family == Family::Embedded ? kappa : 1.0);

    std::vector<double> x2;
    const double lo = 5.0 * cfg.eps, hi = 1.0 - 5.0 * cfg.eps;
    for (int i = 0; i <= 40; ++i) x2.push_back(lo + (hi - lo) * i / 40.0);
    const auto up = solver.slit_profile(p.k, s.densities, 1, x2);
    const auto um = solver.slit_profile(p.k, s.densities, -1, x2);
    p.shape_overlap = shape_overlap(p.k, 1, x2, up);
    cplx dot = 0.0;
    double np = 0.0, nm = 0.0;
    for (std::size_t i = 0; i < x2.size(); ++i) {
        dot += up[i] * std::conj(um[i]);
        np += std::norm(up[i]);
        nm += std::norm(um[i]);
    }
    p.slit_correlation = dot.real() / std::sqrt(np * nm);
    return p;
}

EnhancementReport enhancement_scan(const PhysicalConfig& cfg, const std::vector<double>& kappa_list,
                                   const std::vector<double>& eps_list, Family family, const SpectrumOptions& opts) {
    if (kappa_list.empty() || eps_list.empty()) throw Error(ErrorKind::InvalidArgument, "empty scan list");
    EnhancementReport rep;
    rep.family = family;
    PhysicalConfig c = cfg;
    c.eps = eps_list[0];
    for (double kappa : kappa_list) rep.kappa_scan.push_back(enhancement_point(c, kappa, family, opts));
    for (double eps : eps_list) {
        c.eps = eps;
        rep.eps_scan.push_back(enhancement_point(c, kappa_list[0], family, opts));
    }
    auto fit = [](const std::vector<EnhancementPoint>& pts, bool by_kappa) {
        std::vector<double> x, y;
        for (const auto& p : pts) {
            x.push_back(by_kappa ? p.kappa : p.eps);
            y.push_back(p.amplitude);
        }
        return loglog_fit(x, y);
    };
    if (kappa_list.size() >= 2) rep.kappa_fit = fit(rep.kappa_scan, true);
    if (eps_list.size() >= 2) rep.eps_fit = fit(rep.eps_scan, false);
    return rep;
}

} // namespace slitfano
