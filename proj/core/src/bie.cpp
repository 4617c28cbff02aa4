#include "slitfano/bie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slitfano/special.hpp"

namespace slitfano {

namespace {

using galerkin::LogKind;
using galerkin::Quadrature;
using galerkin::RVec;

constexpr int kDirectSlitModes = 8; // slit modes summed exactly at each k
constexpr double kTailTol = 1e-16;

double central_binomial_ratio(int j) { // binom(2j, j) / 4^j
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c *= (2.0 * i - 1.0) / (2.0 * i);
    return c;
}

// 1/s_{+n} = sum_p b_p / (a n)^(p+1) with b_p = rho^p P_p(-kappa/rho), rho^2 = kappa^2 - k^2;
// for -n replace kappa by -kappa, i.e. b_p -> (-1)^p b_p.
std::array<cplx, Discretization::kAsymptoticOrders> asymptotic_coefficients(cplx k, double kappa) {
    std::array<cplx, Discretization::kAsymptoticOrders> b{};
    const cplx rho2 = kappa * kappa - k * k;
    b[0] = 1.0;
    b[1] = -kappa;
    for (int p = 1; p + 1 < Discretization::kAsymptoticOrders; ++p)
        b[p + 1] = ((2.0 * p + 1.0) * (-kappa) * b[p] - double(p) * rho2 * b[p - 1]) / (p + 1.0);
    return b;
}

// What is left of -1/(d s_n) at orders +n and -n after the asymptotic series.
std::array<cplx, 2> order_remainder(long n, const SpectralPoint& pt, const PhysicalConfig& cfg,
                                    const std::array<cplx, Discretization::kAsymptoticOrders>& b) {
    const double a = 2.0 * pi / cfg.d;
    const double u = a * n;
    std::array<cplx, 2> out;
    for (int side = 0; side < 2; ++side) {
        const long m = side == 0 ? n : -n;
        const cplx sn = -I * zeta(static_cast<int>(m), pt, cfg, 0.0);
        cplx series = 0.0, up = 1.0 / u;
        for (int p = 0; p < Discretization::kAsymptoticOrders; ++p) {
            series += ((side == 1 && (p % 2)) ? -b[p] : b[p]) * up;
            up /= u;
        }
        out[side] = -(1.0 / sn - series) / cfg.d;
    }
    return out;
}

// The asymptotic orders resum to Clausen functions: weight of Cl_{p+1}(theta) in F e^{-i kappa x}.
cplx order_weight(int p, cplx bp, double a, double d) {
    const cplx w = -2.0 / d * bp / std::pow(a, p + 1);
    return (p % 2) ? I * w : w;
}

// ln|X - Y| and (1/pi)(ln|sin(pi Z/2)| + ln|cos(pi W/2)|), Z = X - Y, W = X + Y
struct StaticParts {
    RMat log_distance, interior;
};

StaticParts static_parts(const Quadrature& quad) {
    auto Xof = galerkin::aperture_map;
    const RMat one = RMat::Ones(quad.outer_nodes().size(), quad.inner_nodes().size());
    const RMat logZ = quad.log_part(LogKind::Diagonal, one) + quad.log_part(LogKind::Reflected, one) +
                      quad.smooth_part(quad.sample_real(galerkin::distance_log_remainder));
    const RMat logW = quad.log_part(LogKind::CornerPlus, one) + quad.log_part(LogKind::CornerMinus, one);
    const RMat rest = quad.smooth_part(quad.sample_real([&](double s, double t) {
        const double Z = Xof(s) - Xof(t), W = Xof(s) + Xof(t);
        const double u = 1.0 - std::abs(W);
        const double cosW = special::log_sinc(0.5 * pi * u) + std::log(0.5 * pi) - std::log(2.0 - u);
        return std::log(0.5 * pi) + special::log_sinc(0.5 * pi * Z) + cosW + galerkin::corner_log_remainder(s, t) +
               galerkin::corner_log_remainder(-s, -t);
    }));
    return {logZ, (logZ + logW + rest) / pi};
}

} // namespace

RMat single_layer_matrix(int N) {
    if (N < 2) throw Error(ErrorKind::InvalidArgument, "basis size must be at least 2");
    const Quadrature quad(N);
    const auto sp = static_parts(quad);
    return sp.interior + sp.log_distance / pi;
}

Discretization::Discretization(const PhysicalConfig& cfg, double kappa, int N, const Tolerances& tol)
    : cfg_(cfg), kappa_(kappa), n_(N), tol_(tol) {
    cfg_.validate();
    if (N < 8) throw Error(ErrorKind::InvalidArgument, "basis size N must be at least 8");
    a_ = 2.0 * pi / cfg.d;
    if (!(std::abs(kappa) < 0.5 * a_)) throw Error(ErrorKind::InvalidArgument, "|kappa| must be below pi/d");
    const double eps = cfg.eps;
    const double ae = a_ * eps;
    const double lae = std::log(ae);
    const Quadrature quad(N);
    auto Xof = galerkin::aperture_map;

    // exterior, same slit: exp(i kappa eps Z) Cl_{p+1}(a eps Z), with ln|Z| split off exactly
    const auto phase = quad.sample([&](double s, double t) { return std::exp(I * (kappa * eps * (Xof(s) - Xof(t)))); });
    same_const_ = quad.smooth_part(phase);
    for (int p = 0; p < kAsymptoticOrders; ++p) {
        const int order = p + 1;
        const double lam = special::clausen_log_coefficient(order);
        const CMat A = quad.sample([&](double s, double t) {
            const double th = ae * (Xof(s) - Xof(t));
            return std::exp(I * (kappa * eps * (Xof(s) - Xof(t)))) * (lam * std::pow(th, p));
        });
        const CMat C = quad.sample([&](double s, double t) {
            const double th = ae * (Xof(s) - Xof(t));
            const double reg = special::clausen_regular(order, th) +
                               lam * std::pow(th, p) * (lae + galerkin::distance_log_remainder(s, t));
            return std::exp(I * (kappa * eps * (Xof(s) - Xof(t)))) * reg;
        });
        same_orders_[p] = quad.log_part(LogKind::Diagonal, A) + quad.log_part(LogKind::Reflected, A) +
                          quad.smooth_part(C);
    }
    // exterior, other slit at offset +/- d0: smooth
    for (int side = 0; side < 2; ++side) {
        const double shift = side == 0 ? cfg.d0 : -cfg.d0;
        auto x_of = [&](double s, double t) { return eps * (Xof(s) - Xof(t)) + shift; };
        cross_const_[side] = quad.smooth_part(quad.sample([&](double s, double t) {
            return std::exp(I * (kappa * x_of(s, t)));
        }));
        for (int p = 0; p < kAsymptoticOrders; ++p)
            cross_orders_[side][p] = quad.smooth_part(quad.sample([&](double s, double t) {
                const double x = x_of(s, t);
                return std::exp(I * (kappa * x)) * special::clausen(p + 1, a_ * x);
            }));
    }

    // Rayleigh orders left after the asymptotic series, summed exactly up to n_direct_
    {
        const SpectralPoint ref{cplx(a_ + std::abs(kappa), -0.5), kappa};
        const auto b = asymptotic_coefficients(ref.k, kappa);
        n_direct_ = 4;
        for (long n = 1; n < 4000; ++n) {
            const auto r = order_remainder(n, ref, cfg_, b);
            n_direct_ = static_cast<int>(n);
            if (n >= 4 && pi * pi * (std::abs(r[0]) + std::abs(r[1])) * n < kTailTol) break;
        }
    }
    up_.resize(N, n_direct_);
    um_.resize(N, n_direct_);
    for (int n = 1; n <= n_direct_; ++n) {
        up_.col(n - 1) = galerkin::fourier_projection((kappa + a_ * n) * eps, N);
        um_.col(n - 1) = galerkin::fourier_projection((kappa - a_ * n) * eps, N);
    }

    const auto sp = static_parts(quad);
    interior_static_ = sp.interior;
    rho_ = sp.interior + sp.log_distance / pi;

    modes_.resize(N, kDirectSlitModes);
    for (int m = 1; m <= kDirectSlitModes; ++m) modes_.col(m - 1) = galerkin::cosine_projection(m, N);

    // remaining slit modes: coef_m + 1/(m pi) = -(1/(m pi)) sum_{j>=1} C_j (k eps / (m pi))^(2j), and
    // sum_m 2 cos(m pi (X+1/2)) cos(m pi (Y+1/2)) / m^n = Cl_n(pi Z) + Cl_n(pi (W + 1))
    const double k_ref = 1.1 * (a_ + std::abs(kappa)) + 1.0;
    interior_tail_.clear();
    for (int j = 1; 2 * j + 1 <= special::kMaxClausenOrder; ++j) {
        const int order = 2 * j + 1;
        const double lam = special::clausen_log_coefficient(order);
        auto edge = [&](double v) { return lam * std::pow(pi * v, 2 * j); }; // log weight at distance v
        const RMat Az = quad.sample_real([&](double s, double t) { return edge(Xof(s) - Xof(t)); });
        const RMat Ap = quad.sample_real([&](double s, double t) { return edge(1.0 - Xof(s) - Xof(t)); });
        const RMat Am = quad.sample_real([&](double s, double t) { return edge(1.0 + Xof(s) + Xof(t)); });
        const RMat C = quad.sample_real([&](double s, double t) {
            const double Z = Xof(s) - Xof(t), W = Xof(s) + Xof(t);
            const double lp = std::log(pi);
            double v = special::clausen_regular(order, pi * Z) + edge(Z) * (lp + galerkin::distance_log_remainder(s, t));
            // Cl(pi (1 + W)) less its logarithms at W = -1 and W = +1
            if (W <= 0.0)
                v += special::clausen_regular(order, pi * (1.0 + W)) - edge(1.0 - W) * std::log(pi * (1.0 - W));
            else
                v += special::clausen_regular(order, pi * (1.0 - W)) - edge(1.0 + W) * std::log(pi * (1.0 + W));
            v += edge(1.0 - W) * (lp + galerkin::corner_log_remainder(s, t));
            v += edge(1.0 + W) * (lp + galerkin::corner_log_remainder(-s, -t));
            return v;
        });
        RMat H = quad.log_part(LogKind::Diagonal, Az) + quad.log_part(LogKind::Reflected, Az) +
                 quad.log_part(LogKind::CornerPlus, Ap) + quad.log_part(LogKind::CornerMinus, Am) + quad.smooth_part(C);
        for (int m = 1; m <= kDirectSlitModes; ++m)
            H -= (2.0 / std::pow(m, order)) * modes_.col(m - 1) * modes_.col(m - 1).transpose();
        interior_tail_.push_back((-central_binomial_ratio(j) * std::pow(eps / pi, 2 * j) / pi) * H);
        if (std::pow(k_ref * eps / ((kDirectSlitModes + 1) * pi), 2 * j) < 1e-17) break;
    }
}

CMat Discretization::exterior_core(cplx k, int side) const {
    const SpectralPoint pt{k, kappa_};
    const cplx z0 = zeta(0, pt, cfg_, tol_.wood_margin);
    const cplx c0 = -I / (cfg_.d * z0);
    const auto b = asymptotic_coefficients(k, kappa_);
    const double shift = side < 0 ? 0.0 : (side == 0 ? cfg_.d0 : -cfg_.d0);

    CMat K = c0 * (side < 0 ? same_const_ : cross_const_[side]);
    for (int p = 0; p < kAsymptoticOrders; ++p)
        K += order_weight(p, b[p], a_, cfg_.d) * (side < 0 ? same_orders_[p] : cross_orders_[side][p]);

    // remaining Rayleigh orders: r_n exp(i kappa_n (eps Z + shift)), separable in X and Y
    CVec wp(n_direct_), wm(n_direct_);
    for (int n = 1; n <= n_direct_; ++n) {
        const auto r = order_remainder(n, pt, cfg_, b);
        wp(n - 1) = r[0] * std::exp(I * ((kappa_ + a_ * n) * shift));
        wm(n - 1) = r[1] * std::exp(I * ((kappa_ - a_ * n) * shift));
    }
    K.noalias() += up_ * wp.asDiagonal() * up_.adjoint();
    K.noalias() += um_ * wm.asDiagonal() * um_.adjoint();
    return K;
}

CMat Discretization::exterior_same(cplx k) const { return exterior_core(k, -1); }

CMat Discretization::exterior_cross(cplx k, int sign) const { return exterior_core(k, sign > 0 ? 0 : 1); }

CMat Discretization::interior(cplx k, InteriorKind which) const {
    const double eps = cfg_.eps;
    CMat T = CMat::Zero(n_, n_);
    if (which == InteriorKind::same_end) {
        T = interior_static_.cast<cplx>();
        T(0, 0) += pi * pi * (interior_mode_coefficient(k, eps, 0, which) + 2.0 * std::log(2.0) / pi);
        CVec c(kDirectSlitModes);
        for (int m = 1; m <= kDirectSlitModes; ++m)
            c(m - 1) = 2.0 * (interior_mode_coefficient(k, eps, m, which) + 1.0 / (m * pi));
        const CMat Vc = modes_.cast<cplx>();
        T.noalias() += Vc * c.asDiagonal() * Vc.transpose();
        const cplx k2 = k * k;
        cplx kp = k2;
        for (const auto& W : interior_tail_) {
            T += kp * W.cast<cplx>();
            kp *= k2;
        }
        return T;
    }
    T(0, 0) = pi * pi * interior_mode_coefficient(k, eps, 0, which);
    CVec c(kDirectSlitModes);
    for (int m = 1; m <= kDirectSlitModes; ++m) c(m - 1) = 2.0 * interior_mode_coefficient(k, eps, m, which);
    const CMat Vc = modes_.cast<cplx>();
    T.noalias() += Vc * c.asDiagonal() * Vc.transpose();
    return T;
}

Discretization::Blocks Discretization::blocks(cplx k) const {
    Blocks b;
    b.same = exterior_same(k) + interior(k, InteriorKind::same_end);
    b.plus = exterior_cross(k, +1);
    b.minus = exterior_cross(k, -1);
    b.tilde = interior(k, InteriorKind::opposite_end);
    return b;
}

DiscreteOperator Discretization::block(cplx k, BlockKind which) const {
    DiscreteOperator op;
    op.n_modes = n_;
    const SpectralPoint pt{k, kappa_};
    const CMat P = projection().cast<cplx>();
    switch (which) {
    case BlockKind::Te: op.entries = exterior_same(k); break;
    case BlockKind::Ti: op.entries = interior(k, InteriorKind::same_end); break;
    case BlockKind::Te_plus: op.entries = exterior_cross(k, +1); break;
    case BlockKind::Te_minus: op.entries = exterior_cross(k, -1); break;
    case BlockKind::Ti_tilde: op.entries = interior(k, InteriorKind::opposite_end); break;
    case BlockKind::S: op.entries = rho_.cast<cplx>(); break;
    case BlockKind::S_inf: {
        const auto b = beta_constants(pt, cfg_, tol_);
        op.entries = exterior_same(k) + interior(k, InteriorKind::same_end) - b.beta * P - rho_.cast<cplx>();
        break;
    }
    case BlockKind::S_inf_plus: {
        const auto b = beta_constants(pt, cfg_, tol_);
        op.entries = exterior_cross(k, +1) - b.beta_plus * P;
        break;
    }
    case BlockKind::S_inf_minus: {
        const auto b = beta_constants(pt, cfg_, tol_);
        op.entries = exterior_cross(k, -1) - b.beta_minus * P;
        break;
    }
    case BlockKind::S_tilde_inf: {
        const auto b = beta_constants(pt, cfg_, tol_);
        op.entries = interior(k, InteriorKind::opposite_end) - b.beta_tilde * P;
        break;
    }
    }
    return op;
}

CVec Discretization::forcing(int sign) const {
    const double s = sign > 0 ? 1.0 : -1.0;
    const cplx ph = std::exp(I * (s * 0.5 * kappa_ * cfg_.d0));
    return -ph * galerkin::fourier_projection(kappa_ * cfg_.eps, n_);
}

CMat Discretization::system(cplx k) const {
    const auto b = blocks(k);
    const int N = n_;
    CMat T = CMat::Zero(4 * N, 4 * N);
    for (int h = 0; h < 2; ++h) {
        const int o = 2 * h * N;
        T.block(o, o, N, N) = b.same;
        T.block(o, o + N, N, N) = b.minus;
        T.block(o + N, o, N, N) = b.plus;
        T.block(o + N, o + N, N, N) = b.same;
    }
    T.block(0, 2 * N, N, N) = b.tilde;
    T.block(N, 3 * N, N, N) = b.tilde;
    T.block(2 * N, 0, N, N) = b.tilde;
    T.block(3 * N, N, N, N) = b.tilde;
    return T;
}

CVec Discretization::system_rhs() const {
    CVec f = CVec::Zero(4 * n_);
    f.segment(0, n_) = 2.0 * forcing(-1);
    f.segment(n_, n_) = 2.0 * forcing(+1);
    return f;
}

EvenOddSystems Discretization::even_odd(cplx k) const {
    const auto b = blocks(k);
    const int N = n_;
    EvenOddSystems out;
    out.T_plus.resize(2 * N, 2 * N);
    out.T_minus.resize(2 * N, 2 * N);
    for (int s = 0; s < 2; ++s) {
        CMat& T = s == 0 ? out.T_plus : out.T_minus;
        const CMat diag = s == 0 ? CMat(b.same + b.tilde) : CMat(b.same - b.tilde);
        T.block(0, 0, N, N) = diag;
        T.block(0, N, N, N) = b.minus;
        T.block(N, 0, N, N) = b.plus;
        T.block(N, N, N, N) = diag;
    }
    out.rhs.resize(2 * N);
    out.rhs.segment(0, N) = forcing(-1);
    out.rhs.segment(N, N) = forcing(+1);
    return out;
}

void Discretization::finish(SolveResult& out, double k) const {
    auto& dn = out.densities;
    const CVec* v[4] = {&dn.phi1_minus, &dn.phi1_plus, &dn.phi2_minus, &dn.phi2_plus};
    for (int i = 0; i < 4; ++i) dn.averages[i] = pi * (*v[i])(0);

    const SpectralPoint pt{cplx(k), kappa_};
    const cplx z0 = zeta(0, pt, cfg_, tol_.wood_margin);
    const CVec fp = galerkin::fourier_projection(kappa_ * cfg_.eps, n_);
    const cplx em = std::exp(I * (0.5 * kappa_ * cfg_.d0)); // e^{i kappa d0/2}
    const cplx pre = -I / (cfg_.d * z0) * cfg_.eps;
    // sum over slits of e^{-/+ i kappa d0/2} int exp(-i kappa eps X) phi^{+/-}(X) dX
    auto flux = [&](const CVec& minus, const CVec& plus) {
        return em * fp.dot(minus) + std::conj(em) * fp.dot(plus);
    };
    auto& sc = out.coefficients;
    sc.R = 1.0 + pre * flux(dn.phi1_minus, dn.phi1_plus);
    sc.T = pre * flux(dn.phi2_minus, dn.phi2_plus);
    sc.energy_residual = std::abs(std::norm(sc.R) + std::norm(sc.T) - 1.0);
}

SolveResult Discretization::solve(double k) const {
    const CMat T = system(cplx(k));
    Eigen::PartialPivLU<CMat> lu(T);
    SolveResult out;
    const double rc = lu.rcond();
    out.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!std::isfinite(out.condition_estimate))
        throw Error(ErrorKind::SingularSystem, "boundary-integral system is singular");
    out.near_singular = out.condition_estimate > 1e12;
    const CVec psi = lu.solve(system_rhs()) / cfg_.eps;
    const int N = n_;
    out.densities.phi1_minus = psi.segment(0, N);
    out.densities.phi1_plus = psi.segment(N, N);
    out.densities.phi2_minus = psi.segment(2 * N, N);
    out.densities.phi2_plus = psi.segment(3 * N, N);
    finish(out, k);
    return out;
}

SolveResult Discretization::solve_even_odd(double k) const {
    const auto sys = even_odd(cplx(k));
    Eigen::PartialPivLU<CMat> lp(sys.T_plus), lm(sys.T_minus);
    SolveResult out;
    const double rc = std::min(lp.rcond(), lm.rcond());
    out.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!std::isfinite(out.condition_estimate))
        throw Error(ErrorKind::SingularSystem, "even/odd system is singular");
    out.near_singular = out.condition_estimate > 1e12;
    const CVec xp = lp.solve(sys.rhs) / cfg_.eps;
    const CVec xm = lm.solve(sys.rhs) / cfg_.eps;
    const int N = n_;
    const CVec p1 = xp + xm, p2 = xp - xm;
    out.densities.phi1_minus = p1.segment(0, N);
    out.densities.phi1_plus = p1.segment(N, N);
    out.densities.phi2_minus = p2.segment(0, N);
    out.densities.phi2_plus = p2.segment(N, N);
    finish(out, k);
    return out;
}

DiscreteOperator assemble_block(const SpectralPoint& pt, const PhysicalConfig& cfg, int N, BlockKind which) {
    const Discretization disc(cfg, pt.kappa, N);
    return disc.block(pt.k, which);
}

SolveResult solve_scattering(const SpectralPoint& pt, const PhysicalConfig& cfg, int N) {
    if (pt.k.imag() != 0.0) throw Error(ErrorKind::InvalidArgument, "scattering solves need real k");
    const Discretization disc(cfg, pt.kappa, N);
    return disc.solve(pt.k.real());
}

EvenOddSystems even_odd_split(const SpectralPoint& pt, const PhysicalConfig& cfg, int N) {
    const Discretization disc(cfg, pt.kappa, N);
    return disc.even_odd(pt.k);
}

std::array<cplx, 2> modal_coefficients(cplx k, const ApertureDensities& dens, int sign) {
    const cplx s = k * std::sin(k);
    if (std::abs(s) < 1e-14) throw Error(ErrorKind::ModeResonance, "sin k = 0");
    const cplx top = sign > 0 ? dens.averages[1] : dens.averages[0];
    const cplx bottom = sign > 0 ? dens.averages[3] : dens.averages[2];
    return {-top / s, -bottom / s};
}

std::array<cplx, 2> modal_coefficients(cplx k, const PhysicalConfig& cfg, const ApertureDensities& dens,
                                       int sign, int m) {
    if (m == 0) return modal_coefficients(k, dens, sign);
    const CVec& top = sign > 0 ? dens.phi1_plus : dens.phi1_minus;
    const CVec& bottom = sign > 0 ? dens.phi2_plus : dens.phi2_minus;
    const int N = static_cast<int>(top.size());
    const CVec v = galerkin::cosine_projection(m, N).cast<cplx>();
    const cplx pt = v.dot(top), pb = v.dot(bottom);
    const double mk = m * pi / cfg.eps;
    const cplx K = std::sqrt(mk * mk - k * k);
    const cplx e = std::exp(-K);
    const cplx den = K * (1.0 - e * e);
    // u_m = a_m e^{-K x2} + b_m e^{-K (1 - x2)}
    return {2.0 * (pb + pt * e) / den, 2.0 * (pt + pb * e) / den};
}

cplx slit_field(const SpectralPoint& pt, const PhysicalConfig& cfg, const ApertureDensities& dens, Point x,
                double margin_factor) {
    const double margin = margin_factor * cfg.eps;
    if (!(x.x2 >= margin && x.x2 <= 1.0 - margin))
        throw Error(ErrorKind::OutsideValidRegion, "x2 too close to an aperture");
    int sign = 0;
    double X = 0.0;
    for (int s : {-1, 1}) {
        const double c = s * 0.5 * cfg.d0;
        const double r = x.x1 - c - cfg.d * std::round((x.x1 - c) / cfg.d);
        if (std::abs(r) < 0.5 * cfg.eps) {
            sign = s;
            X = r / cfg.eps;
        }
    }
    if (sign == 0) throw Error(ErrorKind::OutsideValidRegion, "point is not inside a slit");
    const cplx k = pt.k;
    const auto m0 = modal_coefficients(k, dens, sign);
    cplx u = m0[0] * std::cos(k * x.x2) + m0[1] * std::cos(k * (1.0 - x.x2));
    const double dist = std::min(x.x2, 1.0 - x.x2);
    for (int m = 1;; ++m) {
        const double mk = m * pi / cfg.eps;
        const cplx K = std::sqrt(mk * mk - k * k);
        if (std::exp(-K.real() * dist) < 1e-17) break;
        const auto c = modal_coefficients(k, cfg, dens, sign, m);
        u += (c[0] * std::exp(-K * x.x2) + c[1] * std::exp(-K * (1.0 - x.x2))) * std::cos(m * pi * (X + 0.5));
    }
    return u;
}

} // namespace slitfano
