#pragma once
#include <memory>
#include <string>
#include <vector>

#include "slitfano/resonance.hpp"

namespace slitfano {

enum class Source { direct, asymptotic };
const char* to_string(Source s);

struct SpectrumRow {
    double k = 0.0;
    double T_abs = 0.0, R_abs = 0.0, T_arg = 0.0;
    double energy_residual = 0.0;
    double max_slit_amp = 0.0;
    Source source = Source::direct;
    std::string error_flag; // empty when the row is valid
    cplx T, R;
};

struct SpectrumOptions {
    int N = 48;
    int threads = 0;
    double alpha = 0.0; // 0: default_alpha()
    LambdaVariant asymptotic_lambdas = LambdaVariant::hat;
    Tolerances tol;
};

// Midline probes x2 used for the slit amplitude.
inline constexpr double kSlitProbes[3] = {0.25, 0.5, 0.75};

// Shares one discretization across all k for a given (cfg, kappa, N).
class SpectrumSolver {
public:
    SpectrumSolver(const PhysicalConfig& cfg, double kappa, const SpectrumOptions& opts = {});

    const PhysicalConfig& config() const { return cfg_; }
    double kappa() const { return kappa_; }
    double alpha() const { return alpha_; }
    const SpectrumOptions& options() const { return opts_; }
    const Discretization& discretization() const { return *disc_; }
    std::shared_ptr<const FullModel> model() const { return model_; }

    SpectrumRow row(double k, Source source) const;
    SolveResult solve(double k) const { return disc_->solve(k); }
    cplx transmission(double k) const { return disc_->solve(k).coefficients.T; }

    // |u| at the midline probes of both slits.
    double max_slit_amplitude(double k, const ApertureDensities& dens) const;
    // u(x2) on the centreline of slit `sign` at the given heights.
    std::vector<cplx> slit_profile(double k, const ApertureDensities& dens, int sign,
                                   const std::vector<double>& x2) const;

private:
    PhysicalConfig cfg_;
    double kappa_;
    SpectrumOptions opts_;
    double alpha_;
    std::shared_ptr<const Discretization> disc_;
    std::shared_ptr<const FullModel> model_;
};

// Rows never throw; failures are recorded in error_flag.
std::vector<SpectrumRow> sweep(const SpectrumSolver& solver, const std::vector<double>& k_grid, Source source);
std::vector<SpectrumRow> sweep(const PhysicalConfig& cfg, double kappa, const std::vector<double>& k_grid,
                               Source source, const SpectrumOptions& opts = {});

// Uniform grid of `density` points per unit k on [lo, hi], refined by `refine` inside
// [c - half_width, c + half_width] for every centre c. Sorted, duplicates removed.
std::vector<double> adaptive_grid(double lo, double hi, const std::vector<double>& centers, double half_width,
                                  double density = 400.0, int refine = 64);

struct FanoSample {
    double k;
    cplx T;
};

struct FanoFeature {
    double k_star = 0.0; // Re k of the embedded-family resonance
    double k_dip = 0.0, k_peak = 0.0;
    double T_dip = 0.0, T_peak = 0.0;
    double window_c = 0.0;
    double half_width = 0.0; // c kappa^2 eps
    std::vector<FanoSample> samples; // scan of the final window
};

class FeatureNotFound : public Error {
public:
    FeatureNotFound(const std::string& what, FanoFeature best)
        : Error(ErrorKind::FeatureNotFound, what), best_(std::move(best)) {}
    const FanoFeature& best() const { return best_; }

private:
    FanoFeature best_;
};

struct FanoOptions {
    int scan_points = 129;      // uniform points across I_c
    int resonance_points = 161; // extra points across Re k +/- 20 |Im k|
    double dip_threshold = 0.0; // 0: 10 eps
    double peak_threshold = 0.0; // 0: 1 - 10 eps
    double max_c = 1024.0;
};

FanoFeature detect_fano(const SpectrumSolver& solver, const ResonanceBranch& branch, const FanoOptions& opts = {});
FanoFeature detect_fano(const PhysicalConfig& cfg, double kappa, const ResonanceBranch& branch,
                        const SpectrumOptions& sopts = {}, const FanoOptions& opts = {});

struct EnhancementPoint {
    double kappa = 0.0, eps = 0.0;
    double k = 0.0;             // Re k of the branch
    double im_k = 0.0;
    double amplitude = 0.0;     // max |u| at the midline probes
    double prefactor = 0.0;     // amplitude * kappa * eps (Embedded) or amplitude * eps (FabryPerot)
    double T_abs = 0.0;
    double shape_overlap = 0.0; // |<u, shape>| / (|u| |shape|) in the + slit
    double slit_correlation = 0.0; // Re<u+, u-> / (|u+| |u-|)
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct EnhancementReport {
    Family family = Family::Embedded;
    std::vector<EnhancementPoint> kappa_scan; // at eps_list[0]
    std::vector<EnhancementPoint> eps_scan;   // at kappa_list[0]
    SlopeFit kappa_fit, eps_fit;
};

// Overlap with the resonant slit shape: cos(k (x2 - 1/2)) for odd m (parity +), sin for even m.
double shape_overlap(double k, int m, const std::vector<double>& x2, const std::vector<cplx>& u);

EnhancementPoint enhancement_point(const PhysicalConfig& cfg, double kappa, Family family,
                                   const SpectrumOptions& opts = {});

EnhancementReport enhancement_scan(const PhysicalConfig& cfg, const std::vector<double>& kappa_list,
                                   const std::vector<double>& eps_list, Family family,
                                   const SpectrumOptions& opts = {});

} // namespace slitfano
