// Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned below.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "slitfano/selfcheck.hpp"
#include "slitfano/spectra.hpp"

using namespace slitfano;

namespace {

constexpr int kN = 48;

// 1: figure spectrum
constexpr double kSpecLo = 2.5, kSpecHi = 3.1;
constexpr double kWindowMax = 0.05;
constexpr double kCentre = 2.83, kCentreTol = 0.05;
constexpr double kDipMax = 0.2, kPeakMin = 0.9;
// 2: energy balance
constexpr int kEnergyPoints = 50;
constexpr double kEnergyTol = 1e-6;
constexpr double kOffResonance = 1e-2; // distance from Wood anomalies and k = n pi
// 3: reality at kappa = 0
constexpr double kRealTol = 1e-8;
constexpr double kFpWidthLo = 0.01, kFpWidthHi = 10.0;
// 4: kappa scaling
constexpr double kKappa2Lo = 3.0, kKappa2Hi = 5.0;
constexpr double kUniformLo = 0.5, kUniformHi = 2.0;
// 5: prediction error
constexpr double kPredFactor = 10.0;
constexpr double kShrinkMin = 2.5;
// 6: enhancement slopes
constexpr double kSlopeTol = 0.2;
// 7: circle
constexpr double kCircleFactor = 10.0;
// 8: alpha
constexpr double kAlphaRelTol = 5e-5; // four significant digits
constexpr int kNystromPanels = 256;

PhysicalConfig figure(double eps = 0.05) { return PhysicalConfig{1.0, 0.4, eps}; }

int evaluated = 0, passed = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
    ++evaluated;
    if (ok) ++passed;
    std::printf("[%d] %-34s %s  %s  (%.1f s)\n", id, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
}

void run(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(" exception: ") + e.what();
    }
    verdict(id, name, ok, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const ResonanceBranch& branch(const std::vector<ResonanceBranch>& v, Family f) {
    for (const auto& b : v)
        if (b.family == f && b.m == 1) return b;
    throw std::runtime_error("missing branch");
}

std::vector<ResonanceBranch> numeric_roots(const PhysicalConfig& c, double kappa) {
    ResonanceSearch rs;
    rs.N = kN;
    return find_resonances(c, kappa, 1, true, rs);
}

SpectrumOptions basis() {
    SpectrumOptions o;
    o.N = kN;
    return o;
}

FanoFeature figure_feature;
bool have_feature = false;

bool figure_spectrum(std::string& out) {
    const PhysicalConfig c = figure();
    const double kappa = 0.1;
    const SpectrumSolver S(c, kappa, basis());
    const auto ee = branch(numeric_roots(c, kappa), Family::Embedded);
    const auto grid = adaptive_grid(kSpecLo, kSpecHi, {ee.k.real()}, 0.01);
    const auto rows = sweep(S, grid, Source::direct);
    const bool rows_ok = std::all_of(rows.begin(), rows.end(), [](const SpectrumRow& r) { return r.error_flag.empty(); });
    figure_feature = detect_fano(S, ee);
    have_feature = true;
    const auto& f = figure_feature;
    const double lo = std::min(f.k_dip, f.k_peak), hi = std::max(f.k_dip, f.k_peak);
    const double width = 2.0 * f.half_width;
    const double centre = 0.5 * (f.k_dip + f.k_peak);
    const bool inside = lo >= f.k_star - f.half_width && hi <= f.k_star + f.half_width;
    out = "grid " + std::to_string(grid.size()) + " pts, k* " + fmt("%.8f", f.k_star) + ", window " +
          fmt("%.2e", width) + ", dip " + fmt("%.8f", f.k_dip) + " |T| " + fmt("%.2e", f.T_dip) + ", peak " +
          fmt("%.8f", f.k_peak) + " |T| " + fmt("%.6f", f.T_peak);
    return rows_ok && inside && width <= kWindowMax && std::abs(centre - kCentre) <= kCentreTol &&
           f.T_dip <= kDipMax && f.T_peak >= kPeakMin;
}

bool energy(std::string& out) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> K(0.2, 6.2), Q(-0.5, 0.5);
    const PhysicalConfig c = figure();
    double worst = 0.0;
    int n = 0;
    while (n < kEnergyPoints) {
        const double k = K(rng), kappa = Q(rng);
        if (!in_diamond({k, kappa}, c)) continue;
        if (std::abs(std::sin(k)) < kOffResonance) continue;
        bool wood = false;
        for (int m : {-1, 1}) wood |= std::abs(k - std::abs(kappa_n(m, kappa, c))) < kOffResonance;
        if (wood || k - std::abs(kappa) < kOffResonance) continue;
        const auto r = solve_scattering({k, kappa}, c, kN);
        worst = std::max(worst, r.coefficients.energy_residual);
        ++n;
    }
    out = "worst | |R|^2+|T|^2-1 | = " + fmt("%.2e", worst);
    return worst <= kEnergyTol;
}

bool reality(std::string& out) {
    bool ok = true;
    for (double eps : {0.05, 0.025}) {
        const auto roots = numeric_roots(figure(eps), 0.0);
        const auto& ee = branch(roots, Family::Embedded);
        const auto& fp = branch(roots, Family::FabryPerot);
        const double w = -fp.k.imag() / eps;
        ok = ok && std::abs(ee.k.imag()) <= kRealTol && fp.k.imag() < 0.0 && w >= kFpWidthLo && w <= kFpWidthHi;
        out += "eps " + fmt("%.3f", eps) + ": Im k2 " + fmt("%.1e", ee.k.imag()) + ", -Im k1/eps " + fmt("%.3f", w) + "; ";
    }
    return ok;
}

bool kappa_scaling(std::string& out) {
    const PhysicalConfig c = figure();
    const auto a = numeric_roots(c, 0.1), b = numeric_roots(c, 0.05);
    const double r2 = branch(a, Family::Embedded).k.imag() / branch(b, Family::Embedded).k.imag();
    const double r1 = branch(a, Family::FabryPerot).k.imag() / branch(b, Family::FabryPerot).k.imag();
    out = "embedded ratio " + fmt("%.3f", r2) + ", Fabry-Perot ratio " + fmt("%.4f", r1);
    return r2 >= kKappa2Lo && r2 <= kKappa2Hi && r1 >= kUniformLo && r1 <= kUniformHi;
}

bool prediction(std::string& out) {
    const double alpha = default_alpha();
    bool ok = true;
    for (double kappa : {0.0, 0.1}) {
        double err[2][2];
        for (int e = 0; e < 2; ++e) {
            const double eps = e == 0 ? 0.05 : 0.025;
            const PhysicalConfig c = figure(eps);
            const auto roots = numeric_roots(c, kappa);
            const auto p = resonance_prediction(1, kappa, c, alpha);
            err[e][0] = std::abs(branch(roots, Family::FabryPerot).k - p.k_fabry_perot);
            err[e][1] = std::abs(branch(roots, Family::Embedded).k - p.k_embedded);
            const double bound = kPredFactor * eps * eps * std::log(eps) * std::log(eps);
            ok = ok && err[e][0] <= bound && err[e][1] <= bound;
        }
        const double s1 = err[0][0] / err[1][0], s2 = err[0][1] / err[1][1];
        ok = ok && s1 >= kShrinkMin && s2 >= kShrinkMin;
        out += "kappa " + fmt("%.1f", kappa) + ": FP err " + fmt("%.2e", err[0][0]) + " shrink " + fmt("%.2f", s1) +
               ", EE err " + fmt("%.2e", err[0][1]) + " shrink " + fmt("%.2f", s2) + "; ";
    }
    return ok;
}

bool enhancement(std::string& out) {
    const std::vector<double> kappas{0.1, 0.05, 0.025}, epss{0.05, 0.035, 0.025};
    const auto ee = enhancement_scan(figure(), kappas, epss, Family::Embedded, basis());
    const auto fp = enhancement_scan(figure(), kappas, epss, Family::FabryPerot, basis());
    auto near = [](double s, double target) { return std::abs(s - target) <= kSlopeTol; };
    out = "Fano kappa " + fmt("%.3f", ee.kappa_fit.slope) + " eps " + fmt("%.3f", ee.eps_fit.slope) + "; FP kappa " +
          fmt("%.3f", fp.kappa_fit.slope) + " eps " + fmt("%.3f", fp.eps_fit.slope);
    return near(ee.kappa_fit.slope, -1.0) && near(ee.eps_fit.slope, -1.0) && near(fp.kappa_fit.slope, 0.0) &&
           near(fp.eps_fit.slope, -1.0);
}

bool circle(std::string& out) {
    const double eps = 0.05;
    if (!have_feature) {
        out = "no Fano window detected";
        return false;
    }
    double worst = 0.0;
    for (const auto& s : figure_feature.samples) worst = std::max(worst, std::abs(std::abs(s.T + 0.5) - 0.5));
    out = std::to_string(figure_feature.samples.size()) + " samples, max distance " + fmt("%.3e", worst);
    return !figure_feature.samples.empty() && worst <= kCircleFactor * eps;
}

bool invariants(std::string& out) {
    RunConfig rc;
    rc.N = kN;
    const auto results = run_selfcheck(rc);
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) {
            ++failed;
            out += r.name + " failed; ";
        }
    const double ny = oracle::nystrom_alpha(kNystromPanels), ga = default_alpha();
    const double rel = std::abs(ny - ga) / std::abs(ga);
    out += std::to_string(results.size()) + " invariants, " + std::to_string(failed) + " failed; alpha " +
           fmt("%.10f", ga) + " vs " + fmt("%.10f", ny) + " (rel " + fmt("%.1e", rel) + ")";
    return failed == 0 && rel <= kAlphaRelTol;
}

} // namespace

int main() {
    run(1, "Fano feature in the figure spectrum", figure_spectrum);
    run(2, "energy conservation", energy);
    run(3, "embedded root real at kappa = 0", reality);
    run(4, "kappa scaling of the widths", kappa_scaling);
    run(5, "prediction vs numeric roots", prediction);
    run(6, "field enhancement slopes", enhancement);
    run(7, "transmission circle", circle);
    run(8, "invariant suite and alpha oracle", invariants);
    std::printf("passed %d of %d\ncriteria evaluated: %d\n", passed, evaluated, evaluated);
    return 0;
}
