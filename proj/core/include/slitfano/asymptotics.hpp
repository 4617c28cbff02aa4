#pragma once
#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "slitfano/bie.hpp"
#include "slitfano/greens.hpp"

namespace slitfano {

using Mat2 = Eigen::Matrix2cd;

// alpha = <S^-1 1, 1> for the static kernel rho.
struct AlphaConstant {
    double value = 0.0;              // estimate at the largest grid
    std::vector<int> grid_sizes;
    std::vector<double> estimates;   // alpha_N per grid size
    double richardson_estimate = 0.0;
    double error_estimate = 0.0;     // |alpha_Nmax - alpha_{Nmax/2}|
};

AlphaConstant alpha_constant(const std::vector<int>& N_list);

// alpha_N, memoized per N.
double alpha_at(int N);

// Converged alpha used by default everywhere (N = 64).
double default_alpha();

// Largest |kappa| for which the expansions are evaluated.
double max_asymptotic_kappa(const PhysicalConfig& cfg);

// True when kappa exceeds sqrt(eps), where the expansions lose their ordering.
bool kappa_regime_warning(double kappa, const PhysicalConfig& cfg);

enum class LambdaVariant { full, hat };

// Order everywhere: lambda_{1,+}, lambda_{2,+}, lambda_{1,-}, lambda_{2,-}.
struct LambdaSet {
    std::array<cplx, 4> lambda{};
    std::array<cplx, 4> lambda_hat{};
    LambdaVariant variant = LambdaVariant::hat;

    cplx get(int j, int parity) const { return lambda[index(j, parity)]; }
    cplx get_hat(int j, int parity) const { return lambda_hat[index(j, parity)]; }
    static int index(int j, int parity) { return (parity > 0 ? 0 : 2) + (j == 1 ? 0 : 1); }
};

// eps Mhat: eps (alpha [beta +/- beta~, beta-; beta+, beta +/- beta~] + I).
Mat2 matrix_M_hat(const BetaSet& b, double eps, double alpha, int parity);
Mat2 matrix_M_hat(const SpectralPoint& pt, const PhysicalConfig& cfg, double alpha, int parity);

// lambda_hat_{j, parity} in closed form, j = 1 takes +sqrt(beta- beta+).
cplx lambda_hat(const BetaSet& b, double eps, double alpha, int j, int parity);

LambdaSet lambdas_hat(const SpectralPoint& pt, const PhysicalConfig& cfg, double alpha);

// Eigenvalues of a 2x2 matrix labelled like (lambda_1, lambda_2) of the closed form:
// the square root is taken on the side of `reference`, i.e. eps alpha sqrt(beta- beta+).
std::array<cplx, 2> labelled_eigenvalues(const Mat2& M, cplx reference);

// M = eps Mtilde built from the discrete operator L_kappa = T_+/- - P_kappa.
class FullModel {
public:
    FullModel(const PhysicalConfig& cfg, double kappa, int N, const Tolerances& tol = {});
    explicit FullModel(std::shared_ptr<const Discretization> disc);

    const Discretization& discretization() const { return *disc_; }

    // G(j, i) = <L^-1 e_i, e_j>
    Mat2 inner_products(cplx k, int parity) const;
    Mat2 matrix(cplx k, int parity) const;

    // lambda_{j, parity} of the full matrix
    cplx lambda(cplx k, int j, int parity) const;
    LambdaSet lambdas(cplx k, double alpha) const;

private:
    Mat2 inner_products(const Discretization::Blocks& blk, const BetaSet& b, int parity) const;
    Mat2 matrix(const Mat2& G, const BetaSet& b, int parity) const;
    std::array<cplx, 2> eigenvalues(const Discretization::Blocks& blk, const BetaSet& b, int parity) const;
    std::shared_ptr<const Discretization> disc_;
};

Mat2 matrix_M_full(const SpectralPoint& pt, const PhysicalConfig& cfg, int N, int parity);

struct ChannelCoefficients {
    cplx eta;
    cplx mu_plus, mu_minus;
    cplx Lambda1_plus, Lambda1_minus, Lambda2_plus, Lambda2_minus;
    cplx r_minus, r_plus, t_minus, t_plus;
};

ChannelCoefficients mu_lambda_coeffs(const SpectralPoint& pt, const PhysicalConfig& cfg, const LambdaSet& lambdas);
ChannelCoefficients mu_lambda_coeffs(cplx eta, double kappa, const PhysicalConfig& cfg, const LambdaSet& lambdas);

// Leading-order R and T (O(eps + kappa^2) corrections omitted).
ScatteringCoefficients rt_asymptotic(const SpectralPoint& pt, const PhysicalConfig& cfg, const LambdaSet& lambdas,
                                     double alpha);

struct ResonancePrediction {
    cplx k_fabry_perot; // k_m^(1)
    cplx k_embedded;    // k_m^(2)
};

ResonancePrediction resonance_prediction(int m, double kappa, const PhysicalConfig& cfg, double alpha);

// Slit field away from the apertures from the zeroth modal amplitudes.
cplx slit_field_asymptotic(const SpectralPoint& pt, const PhysicalConfig& cfg, const LambdaSet& lambdas,
                           double alpha, double x2, int slit_sign);

} // namespace slitfano
