#pragma once
#include <array>
#include <vector>

#include "slitfano/types.hpp"

namespace slitfano {

// Square root with the cut on the negative imaginary axis, sqrt(1) = 1.
cplx branch_sqrt(cplx w);

double kappa_n(int n, double kappa, const PhysicalConfig& cfg);

cplx zeta(int n, const SpectralPoint& pt, const PhysicalConfig& cfg,
          double wood_margin = Tolerances{}.wood_margin);

bool in_diamond(const SpectralPoint& pt, const PhysicalConfig& cfg);

// Distance from real k to the nearest Rayleigh branch point |kappa_n|.
double wood_distance(const SpectralPoint& pt, const PhysicalConfig& cfg);

// Free quasi-periodic Green function of the Helmholtz operator.
cplx quasiperiodic_green(const SpectralPoint& pt, const PhysicalConfig& cfg, Point x, Point y,
                         const Tolerances& tol = {});

// Half-space Green function with Neumann data on x2 = 1 (upper) or x2 = 0 (lower).
cplx halfspace_green(const SpectralPoint& pt, const PhysicalConfig& cfg, Point x, Point y,
                     const Tolerances& tol = {});

// Remainders of -1/(d s_n) after removing its 1/n, sgn(n)/n^2, 1/n^3 and sgn(n)/n^4 asymptotes,
// where s_n = -i zeta_n. Entry n-1 holds {r_n, r_{-n}}.
struct RayleighTail {
    std::vector<std::array<cplx, 2>> r;
    cplx q;       // kappa^2 + k^2 / 2
    cplx c4;      // kappa (kappa^2 + 3 k^2 / 2)
    cplx zeta0;
};
RayleighTail rayleigh_tail(const SpectralPoint& pt, const PhysicalConfig& cfg, double tol,
                           long max_terms, long min_terms = 0);
std::array<cplx, 2> rayleigh_remainder(long n, const SpectralPoint& pt, const PhysicalConfig& cfg);

// F(x) = -(i/d) sum_n exp(i kappa_n x) / zeta_n, the aperture-line lattice sum.
cplx rayleigh_line_sum(const SpectralPoint& pt, const PhysicalConfig& cfg, double x,
                       const Tolerances& tol = {});

enum class ExteriorKind { same_slit, cross_plus, cross_minus };
enum class InteriorKind { same_end, opposite_end };

cplx exterior_kernel(const SpectralPoint& pt, const PhysicalConfig& cfg, double X, double Y,
                     ExteriorKind which, const Tolerances& tol = {});

// Per-mode coefficient after summing over the longitudinal index:
// cot(g)/(eps g) for same_end, 1/(eps g sin g) for opposite_end, g = sqrt(k^2 - (m pi/eps)^2).
cplx interior_mode_coefficient(cplx k, double eps, int m, InteriorKind variant);

cplx interior_kernel(const SpectralPoint& pt, const PhysicalConfig& cfg, double X, double Y,
                     InteriorKind variant, const Tolerances& tol = {});

struct BetaSet {
    cplx beta_e, beta_plus, beta_minus, beta_i, beta_tilde, beta, gamma, beta_hat, eta;
    // continuous branch of sqrt(beta_minus * beta_plus), equal to beta_minus (1 + eta)
    cplx root;
};

BetaSet beta_constants(const SpectralPoint& pt, const PhysicalConfig& cfg, const Tolerances& tol = {});

// Only the exterior constants, gamma and eta; beta_i, beta_tilde and beta are NaN. Usable at k = m pi.
BetaSet exterior_beta_constants(const SpectralPoint& pt, const PhysicalConfig& cfg, const Tolerances& tol = {});

// Normal-incidence cross constant, computed from its own cosine series.
cplx beta_hat(cplx k, const PhysicalConfig& cfg, const Tolerances& tol = {});

} // namespace slitfano
