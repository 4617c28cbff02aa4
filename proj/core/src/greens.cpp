#include "slitfano/greens.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "slitfano/special.hpp"

namespace slitfano {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BranchPointProximity: return "BranchPointProximity";
    case ErrorKind::SingularArgument: return "SingularArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ModeResonance: return "ModeResonance";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::OutsideValidRegion: return "OutsideValidRegion";
    case ErrorKind::DivisionByZeroLambda: return "DivisionByZeroLambda";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::BranchCut: return "BranchCut";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EscapedRegion: return "EscapedRegion";
    case ErrorKind::RootCountMismatch: return "RootCountMismatch";
    case ErrorKind::FeatureNotFound: return "FeatureNotFound";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

void PhysicalConfig::validate() const {
    std::ostringstream msg;
    if (!(d > 0.0)) msg << "period d must be positive; ";
    if (!(eps > 0.0)) msg << "slit width eps must be positive; ";
    if (!(eps < d0)) msg << "slits overlap (need eps < d0); ";
    if (!(d0 + eps < d)) msg << "slits leave the period (need d0 + eps < d); ";
    const std::string s = msg.str();
    if (!s.empty()) throw Error(ErrorKind::InvalidArgument, s);
}

cplx branch_sqrt(cplx w) {
    const double re = w.real(), im = w.imag();
    if (im == 0.0) {
        if (re >= 0.0) return {std::sqrt(re), 0.0};
        return {0.0, std::sqrt(-re)};
    }
    const cplx s = std::sqrt(w);
    // arguments in (-pi, -pi/2) belong to the sheet continued across the negative real axis
    if (im < 0.0 && re < 0.0) return -s;
    return s;
}

double kappa_n(int n, double kappa, const PhysicalConfig& cfg) {
    return kappa + 2.0 * pi * n / cfg.d;
}

double wood_distance(const SpectralPoint& pt, const PhysicalConfig& cfg) {
    const double a = 2.0 * pi / cfg.d;
    const double k = pt.k.real();
    // nearest |kappa + a n| to k
    double best = std::numeric_limits<double>::infinity();
    const long n0 = std::lround((k - pt.kappa) / a);
    const long n1 = std::lround((-k - pt.kappa) / a);
    for (long c : {n0, n1})
        for (long n = c - 1; n <= c + 1; ++n)
            best = std::min(best, std::abs(std::abs(pt.kappa + a * n) - k));
    return best;
}

cplx zeta(int n, const SpectralPoint& pt, const PhysicalConfig& cfg, double wood_margin) {
    const double kn = kappa_n(n, pt.kappa, cfg);
    if (pt.k.imag() == 0.0 && std::abs(std::abs(pt.k.real()) - std::abs(kn)) < wood_margin) {
        std::ostringstream msg;
        msg << "k = " << pt.k.real() << " within " << wood_margin << " of |kappa_" << n << "| = " << std::abs(kn);
        throw Error(ErrorKind::BranchPointProximity, msg.str());
    }
    return branch_sqrt(pt.k * pt.k - kn * kn);
}

bool in_diamond(const SpectralPoint& pt, const PhysicalConfig& cfg) {
    const double k = pt.k.real();
    const double a = 2.0 * pi / cfg.d;
    if (pt.k.imag() != 0.0) return false;
    if (!(std::abs(pt.kappa) < pi / cfg.d)) return false;
    if (!(k > 0.0)) return false;
    return k < std::min(std::abs(pt.kappa - a), std::abs(pt.kappa + a));
}

std::array<cplx, 2> rayleigh_remainder(long n, const SpectralPoint& pt, const PhysicalConfig& cfg) {
    const double d = cfg.d;
    const double a = 2.0 * pi / d;
    const double kap = pt.kappa;
    const cplx k2 = pt.k * pt.k;
    const cplx q = kap * kap + 0.5 * k2;
    const double nn = static_cast<double>(n);
    const double u = a * nn;
    const double kp = kap + u, km = kap - u;
    const cplx sp = -I * branch_sqrt(k2 - kp * kp);
    const cplx sm = -I * branch_sqrt(k2 - km * km);
    const double base = 1.0 / (2.0 * pi * nn);
    const double odd = kap / (d * u * u);
    const cplx cubic = q / (d * u * u * u);
    const cplx quartic = kap * (kap * kap + 1.5 * k2) / (d * u * u * u * u);
    return {-1.0 / (d * sp) + base - odd + cubic - quartic, -1.0 / (d * sm) + base + odd + cubic + quartic};
}

RayleighTail rayleigh_tail(const SpectralPoint& pt, const PhysicalConfig& cfg, double tol,
                           long max_terms, long min_terms) {
    RayleighTail tail;
    tail.q = pt.kappa * pt.kappa + 0.5 * pt.k * pt.k;
    tail.c4 = pt.kappa * (pt.kappa * pt.kappa + 1.5 * pt.k * pt.k);
    tail.zeta0 = zeta(0, pt, cfg);
    for (long n = 1;; ++n) {
        auto r = rayleigh_remainder(n, pt, cfg);
        tail.r.push_back(r);
        // terms decay like n^-5, so n |r_n| bounds the remaining sum
        if (n >= min_terms && (std::abs(r[0]) + std::abs(r[1])) * n < tol) break;
        if (n >= max_terms)
            throw Error(ErrorKind::NonConvergence, "Rayleigh tail did not reach tolerance");
    }
    return tail;
}

namespace {

cplx line_sum(const RayleighTail& tail, const SpectralPoint& pt, const PhysicalConfig& cfg, double x) {
    const double d = cfg.d;
    const double a = 2.0 * pi / d;
    const double theta = a * x;
    const double s = std::sin(0.5 * theta);
    if (std::abs(s) < 1e-15)
        throw Error(ErrorKind::SingularArgument, "lattice sum evaluated at a source image");
    cplx acc = -I / (d * tail.zeta0);
    acc += std::log(std::abs(2.0 * s)) / pi;
    acc += (2.0 * I * pt.kappa / (d * a * a)) * special::clausen2(theta);
    acc -= (2.0 * tail.q / (d * a * a * a)) * special::clausen3c(theta);
    acc += (2.0 * I * tail.c4 / (d * a * a * a * a)) * special::clausen4s(theta);
    cplx rem = 0.0;
    for (size_t j = tail.r.size(); j-- > 0;) {
        const double nt = (j + 1.0) * theta;
        const cplx e{std::cos(nt), std::sin(nt)};
        rem += tail.r[j][0] * e + tail.r[j][1] * std::conj(e);
    }
    acc += rem;
    return std::exp(I * (pt.kappa * x)) * acc;
}

} // namespace

cplx rayleigh_line_sum(const SpectralPoint& pt, const PhysicalConfig& cfg, double x, const Tolerances& tol) {
    const auto tail = rayleigh_tail(pt, cfg, tol.series, tol.max_terms);
    return line_sum(tail, pt, cfg, x);
}

cplx quasiperiodic_green(const SpectralPoint& pt, const PhysicalConfig& cfg, Point x, Point y,
                         const Tolerances& tol) {
    const double h = std::abs(x.x2 - y.x2);
    const double dx = x.x1 - y.x1;
    if (h == 0.0) {
        if (dx == 0.0) throw Error(ErrorKind::SingularArgument, "x = y");
        return 0.5 * rayleigh_line_sum(pt, cfg, dx, tol);
    }
    const double d = cfg.d;
    const double a = 2.0 * pi / d;
    const double ratio = std::exp(-a * h);
    auto term = [&](long n) {
        const double kn = pt.kappa + a * n;
        const cplx z = branch_sqrt(pt.k * pt.k - kn * kn);
        return -I / (2.0 * d) / z * std::exp(I * (kn * dx) + I * z * h);
    };
    cplx sum = term(0);
    const double kabs = std::abs(pt.k);
    for (long n = 1;; ++n) {
        const cplx tp = term(n), tm = term(-n);
        sum += tp + tm;
        const bool evanescent = a * n - std::abs(pt.kappa) > kabs + 1.0;
        if (evanescent && (std::abs(tp) + std::abs(tm)) < tol.series * (1.0 - ratio)) break;
        if (n >= tol.max_terms) throw Error(ErrorKind::NonConvergence, "modal sum did not converge");
    }
    return sum;
}

cplx halfspace_green(const SpectralPoint& pt, const PhysicalConfig& cfg, Point x, Point y,
                     const Tolerances& tol) {
    Point image = x;
    if (x.x2 >= 1.0 && y.x2 >= 1.0)
        image.x2 = 2.0 - x.x2;
    else if (x.x2 <= 0.0 && y.x2 <= 0.0)
        image.x2 = -x.x2;
    else
        throw Error(ErrorKind::InvalidArgument, "points must both lie above or both below the slab");
    return quasiperiodic_green(pt, cfg, x, y, tol) + quasiperiodic_green(pt, cfg, image, y, tol);
}

cplx exterior_kernel(const SpectralPoint& pt, const PhysicalConfig& cfg, double X, double Y,
                     ExteriorKind which, const Tolerances& tol) {
    double shift = 0.0;
    if (which == ExteriorKind::cross_plus) shift = cfg.d0;
    if (which == ExteriorKind::cross_minus) shift = -cfg.d0;
    if (which == ExteriorKind::same_slit && X == Y)
        throw Error(ErrorKind::SingularArgument, "same-slit kernel at X = Y");
    return rayleigh_line_sum(pt, cfg, cfg.eps * (X - Y) + shift, tol);
}

cplx interior_mode_coefficient(cplx k, double eps, int m, InteriorKind variant) {
    constexpr double guard = 1e-14;
    if (m == 0) {
        const cplx s = std::sin(k);
        if (std::abs(s) < guard) throw Error(ErrorKind::ModeResonance, "sin k = 0");
        if (variant == InteriorKind::same_end) return std::cos(k) / (eps * k * s);
        return 1.0 / (eps * k * s);
    }
    const double mk = m * pi / eps;
    const cplx g = branch_sqrt(k * k - mk * mk);
    if (g.imag() >= 0.0) {
        // scaled exponentials: |q| <= 1
        const cplx e1 = std::exp(I * g);
        const cplx q = e1 * e1;
        const cplx den = 1.0 - q;
        if (std::abs(den) < guard) throw Error(ErrorKind::ModeResonance, "interior cavity mode");
        if (variant == InteriorKind::same_end) return (-I * (1.0 + q) / den) / (eps * g);
        return (-2.0 * I * e1 / den) / (eps * g);
    }
    const cplx s = std::sin(g);
    if (std::abs(s) < guard) throw Error(ErrorKind::ModeResonance, "interior cavity mode");
    if (variant == InteriorKind::same_end) return std::cos(g) / (eps * g * s);
    return 1.0 / (eps * g * s);
}

cplx interior_kernel(const SpectralPoint& pt, const PhysicalConfig& cfg, double X, double Y,
                     InteriorKind variant, const Tolerances& tol) {
    const double eps = cfg.eps;
    const cplx k = pt.k;
    auto cosm = [](int m, double Z) { return std::cos(m * pi * (Z + 0.5)); };
    if (variant == InteriorKind::same_end) {
        if (X == Y) throw Error(ErrorKind::SingularArgument, "same-end kernel at X = Y");
        cplx sum = interior_mode_coefficient(k, eps, 0, variant) + 2.0 * std::log(2.0) / pi;
        sum += (std::log(std::abs(std::sin(0.5 * pi * (X - Y)))) +
                std::log(std::abs(std::sin(0.5 * pi * (X + Y + 1.0))))) / pi;
        for (int m = 1;; ++m) {
            const cplx c = 2.0 * (interior_mode_coefficient(k, eps, m, variant) + 1.0 / (m * pi));
            sum += c * cosm(m, X) * cosm(m, Y);
            if (std::abs(c) * m < tol.series) break;
            if (m >= tol.max_terms) throw Error(ErrorKind::NonConvergence, "interior mode sum");
        }
        return sum;
    }
    cplx sum = interior_mode_coefficient(k, eps, 0, variant);
    for (int m = 1;; ++m) {
        const cplx c = 2.0 * interior_mode_coefficient(k, eps, m, variant);
        sum += c * cosm(m, X) * cosm(m, Y);
        if (std::abs(c) < 0.1 * tol.series) break;
        if (m >= tol.max_terms) throw Error(ErrorKind::NonConvergence, "interior mode sum");
    }
    return sum;
}

cplx beta_hat(cplx k, const PhysicalConfig& cfg, const Tolerances& tol) {
    const double d = cfg.d;
    const double theta = 2.0 * pi * cfg.d0 / d;
    const SpectralPoint p0{k, 0.0};
    const cplx kd2 = (k * d) * (k * d);
    // 1/sqrt((2 pi n)^2 - (kd)^2) = 1/(2 pi n) + (kd)^2 / (2 (2 pi n)^3) + rhat_n
    cplx rem = 0.0;
    for (long n = 1;; ++n) {
        const double u = 2.0 * pi * n;
        const cplx root = d * (-I) * zeta(static_cast<int>(n), p0, cfg);
        const cplx rh = 1.0 / root - 1.0 / u - kd2 / (2.0 * u * u * u);
        rem += rh * std::cos(n * theta);
        if (std::abs(rh) * n < 0.5 * tol.series) break;
        if (n >= tol.max_terms) throw Error(ErrorKind::NonConvergence, "beta_hat series");
    }
    const double log_part = -std::log(std::abs(2.0 * std::sin(0.5 * theta))); // sum cos(n t)/n
    const cplx series = log_part / (2.0 * pi) + kd2 / (16.0 * pi * pi * pi) * special::clausen3c(theta) + rem;
    return -I / (d * zeta(0, p0, cfg)) - 2.0 * series;
}

BetaSet exterior_beta_constants(const SpectralPoint& pt, const PhysicalConfig& cfg, const Tolerances& tol) {
    const double d = cfg.d;
    const double a = 2.0 * pi / d;
    const double eps = cfg.eps;
    const auto tail = rayleigh_tail(pt, cfg, tol.series, tol.max_terms);
    BetaSet b{};
    cplx rsum = 0.0;
    for (size_t j = tail.r.size(); j-- > 0;) rsum += tail.r[j][0] + tail.r[j][1];
    b.beta_e = std::log(2.0 * pi * eps / d) / pi - I / (d * tail.zeta0) -
               2.0 * tail.q / (d * a * a * a) * special::zeta3() + rsum;
    b.beta_plus = line_sum(tail, pt, cfg, cfg.d0);
    b.beta_minus = line_sum(tail, pt, cfg, -cfg.d0);
    b.gamma = b.beta_e + 2.0 * std::log(2.0) / pi - std::log(eps) / pi;
    b.beta_hat = beta_hat(pt.k, cfg, tol);
    // branch of sqrt(beta- beta+) continuous from beta- at kappa = 0
    const cplx ratio_root = std::sqrt(b.beta_plus / b.beta_minus);
    b.root = b.beta_minus * ratio_root;
    b.eta = ratio_root - 1.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    b.beta_i = b.beta_tilde = b.beta = cplx(nan, nan);
    return b;
}

BetaSet beta_constants(const SpectralPoint& pt, const PhysicalConfig& cfg, const Tolerances& tol) {
    BetaSet b = exterior_beta_constants(pt, cfg, tol);
    const double eps = cfg.eps;
    const cplx cot_term = interior_mode_coefficient(pt.k, eps, 0, InteriorKind::same_end);
    b.beta_i = cot_term + 2.0 * std::log(2.0) / pi;
    b.beta_tilde = interior_mode_coefficient(pt.k, eps, 0, InteriorKind::opposite_end);
    b.beta = b.beta_e + b.beta_i;
    return b;
}

} // namespace slitfano
