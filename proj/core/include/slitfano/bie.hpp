#pragma once
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "slitfano/galerkin.hpp"
#include "slitfano/greens.hpp"

namespace slitfano {

using galerkin::CMat;
using galerkin::CVec;
using galerkin::RMat;

// Te, Ti, Te_plus, Te_minus, Ti_tilde are the rescaled boundary operators.
// S has kernel rho; the *_inf kinds are what is left after removing the constant and S parts:
// Te + Ti = beta P + S + S_inf, Te_plus/minus = beta^+/- P + S_inf_plus/minus, Ti_tilde = beta~ P + S_tilde_inf.
enum class BlockKind { Te, Ti, Te_plus, Te_minus, Ti_tilde, S, S_inf, S_inf_plus, S_inf_minus, S_tilde_inf };

struct DiscreteOperator {
    int n_modes = 0;
    CMat entries;
    std::string basis = "weighted-chebyshev (mapped)";
};

// Coefficients of the densities phi_1^-, phi_1^+, phi_2^- and phi_2^+ in the basis.
struct ApertureDensities {
    CVec phi1_minus, phi1_plus, phi2_minus, phi2_plus;
    std::array<cplx, 4> averages{}; // <phi, 1> in the order above
};

struct ScatteringCoefficients {
    cplx R;
    cplx T;
    double energy_residual = 0.0;
};

struct SolveResult {
    ApertureDensities densities;
    ScatteringCoefficients coefficients;
    double condition_estimate = 0.0;
    bool near_singular = false; // condition estimate above 1e12
};

struct EvenOddSystems {
    CMat T_plus, T_minus; // 2N x 2N
    CVec rhs;             // [<f^-, phi_j>, <f^+, phi_j>]
};

// k-independent pieces of the Galerkin discretization for one (cfg, kappa, N).
class Discretization {
public:
    Discretization(const PhysicalConfig& cfg, double kappa, int N, const Tolerances& tol = {});

    int size() const { return n_; }
    double kappa() const { return kappa_; }
    const PhysicalConfig& config() const { return cfg_; }

    struct Blocks {
        CMat same;  // Te + Ti
        CMat plus;  // Te_plus
        CMat minus; // Te_minus
        CMat tilde; // Ti_tilde
    };
    Blocks blocks(cplx k) const;

    CMat exterior_same(cplx k) const;
    CMat exterior_cross(cplx k, int sign) const;
    CMat interior(cplx k, InteriorKind which) const;
    DiscreteOperator block(cplx k, BlockKind which) const;

    const RMat& rho() const { return rho_; }
    RMat projection() const { return galerkin::constant_kernel(n_); }

    // <f^{sign}, phi_j> with f^{+/-}(X) = -exp(i kappa (eps X +/- d0/2)).
    CVec forcing(int sign) const;

    // Full 4N system in the order [phi_1^-, phi_1^+, phi_2^-, phi_2^+].
    CMat system(cplx k) const;
    CVec system_rhs() const;
    EvenOddSystems even_odd(cplx k) const;

    SolveResult solve(double k) const;
    SolveResult solve_even_odd(double k) const;

    // Modal tables for the slit field.
    galerkin::RVec cosine_projection(int m) const { return galerkin::cosine_projection(m, n_); }

    // Asymptotic orders of the Rayleigh series that are resummed into Clausen functions.
    static constexpr int kAsymptoticOrders = 13;

private:
    CMat exterior_core(cplx k, int side) const; // side -1: same slit, 0: shift +d0, 1: shift -d0
    void finish(SolveResult& out, double k) const;

    PhysicalConfig cfg_;
    double kappa_;
    int n_;
    Tolerances tol_;
    double a_;
    int n_direct_ = 0;                                   // Rayleigh orders summed exactly
    CMat same_const_, cross_const_[2];                   // exp(i kappa x)
    CMat same_orders_[kAsymptoticOrders];                // exp(i kappa x) Cl_{p+1}(a x), x = eps Z
    CMat cross_orders_[2][kAsymptoticOrders];            // the same with x = eps Z +/- d0
    CMat up_, um_;                                       // <exp(i kappa_{+/-n} eps X), psi_j>
    RMat rho_;                                           // S
    RMat interior_static_;                               // log parts of Ti
    RMat modes_;                                         // cosine projections, N x kDirectSlitModes
    std::vector<RMat> interior_tail_;                    // k^(2j) coefficients of the higher slit modes
};

// Matrix of the static kernel
//   rho(X, Y) = (1/pi)(ln|X - Y| + ln|sin(pi (X - Y)/2)| + ln|sin(pi (X + Y + 1)/2)|).
RMat single_layer_matrix(int N);

DiscreteOperator assemble_block(const SpectralPoint& pt, const PhysicalConfig& cfg, int N, BlockKind which);

SolveResult solve_scattering(const SpectralPoint& pt, const PhysicalConfig& cfg, int N = 48);

EvenOddSystems even_odd_split(const SpectralPoint& pt, const PhysicalConfig& cfg, int N = 48);

// Field inside a slit at (x1, x2). slit_sign picks the slit centred at sign * d0/2.
cplx slit_field(const SpectralPoint& pt, const PhysicalConfig& cfg, const ApertureDensities& dens,
                Point x, double margin_factor = 5.0);

// Zeroth modal amplitudes in slit `sign`: u ~ a0 cos(k x2) + b0 cos(k (1 - x2)).
std::array<cplx, 2> modal_coefficients(cplx k, const ApertureDensities& dens, int sign);

// Higher modal amplitudes a_m, b_m of cos(m pi (X + 1/2)) in slit `sign`.
std::array<cplx, 2> modal_coefficients(cplx k, const PhysicalConfig& cfg, const ApertureDensities& dens,
                                       int sign, int m);

} // namespace slitfano
