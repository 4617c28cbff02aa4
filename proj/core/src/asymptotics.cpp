#include "slitfano/asymptotics.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "slitfano/galerkin.hpp"

namespace slitfano {

namespace {

std::mutex alpha_mutex;
std::map<int, double> alpha_cache;

double alpha_uncached(int N) {
    const RMat S = single_layer_matrix(N);
    Eigen::PartialPivLU<RMat> lu(S);
    if (!(lu.rcond() > 1e-15)) throw Error(ErrorKind::SingularOperator, "static operator S is singular");
    galerkin::RVec one = galerkin::RVec::Zero(N);
    one(0) = pi; // <1, psi_j>
    const galerkin::RVec q = lu.solve(one);
    return pi * q(0);
}

void check_kappa(double kappa, const PhysicalConfig& cfg) {
    if (std::abs(kappa) > max_asymptotic_kappa(cfg))
        throw Error(ErrorKind::OutsideValidRegion, "|kappa| above 0.3 pi/d");
}

} // namespace

double alpha_at(int N) {
    {
        std::lock_guard<std::mutex> lock(alpha_mutex);
        auto it = alpha_cache.find(N);
        if (it != alpha_cache.end()) return it->second;
    }
    const double v = alpha_uncached(N);
    std::lock_guard<std::mutex> lock(alpha_mutex);
    alpha_cache.emplace(N, v);
    return v;
}

double default_alpha() { return alpha_at(64); }

AlphaConstant alpha_constant(const std::vector<int>& N_list) {
    if (N_list.size() < 3) throw Error(ErrorKind::InvalidArgument, "alpha needs at least three grid sizes");
    for (size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] <= N_list[i - 1]) throw Error(ErrorKind::InvalidArgument, "grid sizes must ascend");
    AlphaConstant out;
    out.grid_sizes = N_list;
    for (int N : N_list) out.estimates.push_back(alpha_at(N));
    const size_t n = out.estimates.size();
    const double a1 = out.estimates[n - 3], a2 = out.estimates[n - 2], a3 = out.estimates[n - 1];
    out.value = a3;
    // Richardson with the observed order of the last three grids
    const double d1 = a2 - a1, d2 = a3 - a2;
    out.richardson_estimate = a3;
    if (std::abs(d2) > 1e-14 * std::abs(a3) && std::abs(d1) > std::abs(d2)) {
        const double ratio = double(N_list[n - 1]) / N_list[n - 2];
        const double p = std::log(std::abs(d1 / d2)) / std::log(double(N_list[n - 2]) / N_list[n - 3]);
        out.richardson_estimate = a3 + d2 / (std::pow(ratio, p) - 1.0);
    }
    const int half = N_list.back() / 2;
    out.error_estimate = std::abs(a3 - alpha_at(std::max(half, 2)));
    return out;
}

double max_asymptotic_kappa(const PhysicalConfig& cfg) { return 0.3 * pi / cfg.d; }

bool kappa_regime_warning(double kappa, const PhysicalConfig& cfg) { return std::abs(kappa) > std::sqrt(cfg.eps); }

Mat2 matrix_M_hat(const BetaSet& b, double eps, double alpha, int parity) {
    const cplx diag = parity > 0 ? b.beta + b.beta_tilde : b.beta - b.beta_tilde;
    Mat2 M;
    M << alpha * diag + 1.0, alpha * b.beta_minus, alpha * b.beta_plus, alpha * diag + 1.0;
    return eps * M;
}

Mat2 matrix_M_hat(const SpectralPoint& pt, const PhysicalConfig& cfg, double alpha, int parity) {
    return matrix_M_hat(beta_constants(pt, cfg), cfg.eps, alpha, parity);
}

cplx lambda_hat(const BetaSet& b, double eps, double alpha, int j, int parity) {
    const cplx diag = parity > 0 ? b.beta + b.beta_tilde : b.beta - b.beta_tilde;
    const cplx r = j == 1 ? b.root : -b.root;
    return eps + eps * alpha * (diag + r);
}

LambdaSet lambdas_hat(const SpectralPoint& pt, const PhysicalConfig& cfg, double alpha) {
    const auto b = beta_constants(pt, cfg);
    LambdaSet out;
    out.variant = LambdaVariant::hat;
    for (int parity : {1, -1})
        for (int j : {1, 2}) out.lambda_hat[LambdaSet::index(j, parity)] = lambda_hat(b, cfg.eps, alpha, j, parity);
    out.lambda = out.lambda_hat;
    return out;
}

std::array<cplx, 2> labelled_eigenvalues(const Mat2& M, cplx reference) {
    const cplx half_trace = 0.5 * (M(0, 0) + M(1, 1));
    const cplx h = 0.5 * (M(0, 0) - M(1, 1));
    cplx q = std::sqrt(h * h + M(0, 1) * M(1, 0));
    if ((q * std::conj(reference)).real() < 0.0) q = -q;
    return {half_trace + q, half_trace - q};
}

FullModel::FullModel(const PhysicalConfig& cfg, double kappa, int N, const Tolerances& tol)
    : disc_(std::make_shared<Discretization>(cfg, kappa, N, tol)) {}

FullModel::FullModel(std::shared_ptr<const Discretization> disc) : disc_(std::move(disc)) {}

Mat2 FullModel::inner_products(const Discretization::Blocks& blk, const BetaSet& b, int parity) const {
    const int N = disc_->size();
    const CMat P = disc_->projection().cast<cplx>();
    const cplx diag = parity > 0 ? b.beta + b.beta_tilde : b.beta - b.beta_tilde;
    const CMat same = (parity > 0 ? CMat(blk.same + blk.tilde) : CMat(blk.same - blk.tilde)) - diag * P;
    CMat L(2 * N, 2 * N);
    L.block(0, 0, N, N) = same;
    L.block(N, N, N, N) = same;
    L.block(0, N, N, N) = blk.minus - b.beta_minus * P;
    L.block(N, 0, N, N) = blk.plus - b.beta_plus * P;
    Eigen::PartialPivLU<CMat> lu(L);
    if (!(lu.rcond() > 1e-14)) throw Error(ErrorKind::SingularOperator, "L_kappa is numerically singular");
    CMat rhs = CMat::Zero(2 * N, 2);
    rhs(0, 0) = pi;
    rhs(N, 1) = pi;
    const CMat x = lu.solve(rhs);
    Mat2 G;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) G(j, i) = pi * x(j * N, i);
    return G;
}

Mat2 FullModel::inner_products(cplx k, int parity) const {
    const auto b = beta_constants(SpectralPoint{k, disc_->kappa()}, disc_->config());
    return inner_products(disc_->blocks(k), b, parity);
}

Mat2 FullModel::matrix(const Mat2& G, const BetaSet& b, int parity) const {
    const cplx diag = parity > 0 ? b.beta + b.beta_tilde : b.beta - b.beta_tilde;
    Mat2 B;
    B << diag, b.beta_minus, b.beta_plus, diag;
    return disc_->config().eps * (G * B + Mat2::Identity());
}

Mat2 FullModel::matrix(cplx k, int parity) const {
    const auto b = beta_constants(SpectralPoint{k, disc_->kappa()}, disc_->config());
    return matrix(inner_products(disc_->blocks(k), b, parity), b, parity);
}

std::array<cplx, 2> FullModel::eigenvalues(const Discretization::Blocks& blk, const BetaSet& b, int parity) const {
    const Mat2 G = inner_products(blk, b, parity);
    // G(0, 0) = alpha + O(eps) fixes the labelling of the closed form
    return labelled_eigenvalues(matrix(G, b, parity), disc_->config().eps * G(0, 0) * b.root);
}

cplx FullModel::lambda(cplx k, int j, int parity) const {
    const auto b = beta_constants(SpectralPoint{k, disc_->kappa()}, disc_->config());
    return eigenvalues(disc_->blocks(k), b, parity)[j == 1 ? 0 : 1];
}

LambdaSet FullModel::lambdas(cplx k, double alpha) const {
    const auto b = beta_constants(SpectralPoint{k, disc_->kappa()}, disc_->config());
    const auto blk = disc_->blocks(k);
    const double eps = disc_->config().eps;
    LambdaSet out;
    out.variant = LambdaVariant::full;
    for (int parity : {1, -1}) {
        const auto ev = eigenvalues(blk, b, parity);
        for (int j : {1, 2}) {
            out.lambda[LambdaSet::index(j, parity)] = ev[j - 1];
            out.lambda_hat[LambdaSet::index(j, parity)] = lambda_hat(b, eps, alpha, j, parity);
        }
    }
    return out;
}

Mat2 matrix_M_full(const SpectralPoint& pt, const PhysicalConfig& cfg, int N, int parity) {
    const FullModel model(cfg, pt.kappa, N);
    return model.matrix(pt.k, parity);
}

ChannelCoefficients mu_lambda_coeffs(cplx eta, double kappa, const PhysicalConfig& cfg, const LambdaSet& L) {
    for (cplx v : L.lambda)
        if (v == 0.0) throw Error(ErrorKind::DivisionByZeroLambda, "lambda vanishes");
    ChannelCoefficients c;
    c.eta = eta;
    const cplx e = std::exp(I * (0.5 * kappa * cfg.d0));
    const cplx one_eta = 1.0 + eta;
    c.mu_plus = e + one_eta / e;
    c.mu_minus = e - one_eta / e;
    const cplx i1p = 1.0 / L.get(1, 1), i1m = 1.0 / L.get(1, -1);
    const cplx i2p = 1.0 / L.get(2, 1), i2m = 1.0 / L.get(2, -1);
    c.Lambda1_plus = i1p + i1m;
    c.Lambda1_minus = i1p - i1m;
    c.Lambda2_plus = i2p + i2m;
    c.Lambda2_minus = i2p - i2m;
    c.r_minus = (-c.mu_plus * c.Lambda1_plus + c.mu_minus * c.Lambda2_plus) / (2.0 * one_eta);
    c.r_plus = -0.5 * (c.mu_plus * c.Lambda1_plus + c.mu_minus * c.Lambda2_plus);
    c.t_minus = (-c.mu_plus * c.Lambda1_minus + c.mu_minus * c.Lambda2_minus) / (2.0 * one_eta);
    c.t_plus = -0.5 * (c.mu_plus * c.Lambda1_minus + c.mu_minus * c.Lambda2_minus);
    return c;
}

ChannelCoefficients mu_lambda_coeffs(const SpectralPoint& pt, const PhysicalConfig& cfg, const LambdaSet& lambdas) {
    check_kappa(pt.kappa, cfg);
    return mu_lambda_coeffs(beta_constants(pt, cfg).eta, pt.kappa, cfg, lambdas);
}

ScatteringCoefficients rt_asymptotic(const SpectralPoint& pt, const PhysicalConfig& cfg, const LambdaSet& lambdas,
                                     double alpha) {
    check_kappa(pt.kappa, cfg);
    const auto b = beta_constants(pt, cfg);
    const auto c = mu_lambda_coeffs(b.eta, pt.kappa, cfg, lambdas);
    const cplx z0 = zeta(0, pt, cfg);
    const cplx tau = -I / (2.0 * cfg.d * z0 * (1.0 + b.eta));
    const cplx pre = cfg.eps * tau * alpha;
    const cplx mp2 = c.mu_plus * c.mu_plus, mm2 = c.mu_minus * c.mu_minus;
    ScatteringCoefficients out;
    out.R = 1.0 + pre * (-mp2 * c.Lambda1_plus + mm2 * c.Lambda2_plus);
    out.T = pre * (-mp2 * c.Lambda1_minus + mm2 * c.Lambda2_minus);
    out.energy_residual = std::abs(std::norm(out.R) + std::norm(out.T) - 1.0);
    return out;
}

ResonancePrediction resonance_prediction(int m, double kappa, const PhysicalConfig& cfg, double alpha) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "mode index must be positive");
    if (!(m < 2.0 / cfg.d)) throw Error(ErrorKind::OutsideValidRegion, "mode index must satisfy m < 2/d");
    check_kappa(kappa, cfg);
    const double km = m * pi;
    const double eps = cfg.eps;
    const auto b = exterior_beta_constants(SpectralPoint{cplx(km), kappa}, cfg);
    const cplx cross = kappa == 0.0 ? b.beta_hat : 0.5 * (b.beta_plus + b.beta_minus);
    const cplx base = eps * std::log(eps) / pi + (1.0 / alpha + b.gamma) * eps;
    ResonancePrediction out;
    out.k_fabry_perot = km + 2.0 * km * (base + cross * eps);
    out.k_embedded = km + 2.0 * km * (base - cross * eps);
    return out;
}

cplx slit_field_asymptotic(const SpectralPoint& pt, const PhysicalConfig& cfg, const LambdaSet& lambdas,
                           double alpha, double x2, int slit_sign) {
    const double margin = 5.0 * cfg.eps;
    if (!(x2 >= margin && x2 <= 1.0 - margin))
        throw Error(ErrorKind::OutsideValidRegion, "x2 too close to an aperture");
    const auto c = mu_lambda_coeffs(pt, cfg, lambdas);
    const cplx k = pt.k;
    const cplx r = slit_sign > 0 ? c.r_plus : c.r_minus;
    const cplx t = slit_sign > 0 ? c.t_plus : c.t_minus;
    return -alpha / (k * std::sin(k)) * (r * std::cos(k * x2) + t * std::cos(k * (1.0 - x2)));
}

} // namespace slitfano
