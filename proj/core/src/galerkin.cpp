#include "slitfano/galerkin.hpp"

#include <cmath>
#include <vector>

#include "slitfano/special.hpp"

namespace slitfano::galerkin {

namespace {

const double quarter_pi_log = std::log(0.25 * pi);

// ln(sin x / (x (pi - x))) on [0, pi]
double log_sine_bridge(double x) {
    if (x <= 0.5 * pi) return special::log_sinc(x) - std::log(pi - x);
    return special::log_sinc(pi - x) - std::log(x);
}

// tau(s): the complex zeros of 1 - X(s) - X(t) sit at t = 1 +/- i tau(s)
double corner_offset(double s) { return (4.0 / pi) * std::asinh(std::sin(0.25 * pi * (1.0 - s))); }

} // namespace

double aperture_map(double s) { return 0.5 * std::sin(0.5 * pi * s); }

double aperture_map_derivative(double s) { return 0.25 * pi * std::cos(0.5 * pi * s); }

void log_moments(cplx c, int mmax, double* out) {
    cplx z = c + std::sqrt(c - 1.0) * std::sqrt(c + 1.0);
    if (std::abs(z) < 1.0) z = 1.0 / z;
    out[0] = pi * (std::log(std::abs(z)) - std::log(2.0));
    const cplx zi = 1.0 / z;
    cplx p = 1.0;
    for (int m = 1; m <= mmax; ++m) {
        p *= zi;
        out[m] = -pi / m * p.real();
    }
}

double distance_log_remainder(double s, double t) {
    // X(s) - X(t) = cos(pi (s + t) / 4) sin(pi (s - t) / 4)
    const double x = 0.25 * pi * (2.0 - s - t);
    return 3.0 * quarter_pi_log + special::log_sinc(0.25 * pi * (s - t)) + log_sine_bridge(x);
}

double corner_log_remainder(double s, double t) {
    // 1 - X(s) - X(t) = sigma(s)^2 + sigma(t)^2 with sigma(s) = sin(pi (1 - s) / 4)
    const double ss = std::sin(0.25 * pi * (1.0 - s));
    const double st = std::sin(0.25 * pi * (1.0 - t));
    const double tau = corner_offset(s);
    const double rt = 1.0 - t;
    return std::log((ss * ss + st * st) / (rt * rt + tau * tau));
}

Quadrature::Quadrature(int n, int outer, int inner) : n_(n) {
    if (outer <= 0) outer = 2 * n + 48;
    if (inner <= 0) inner = n + 40;
    std::vector<double> x, w;
    special::gauss_legendre(outer, x, w);
    s_.resize(outer);
    alpha_.resize(outer);
    test_.resize(outer, n);
    for (int q = 0; q < outer; ++q) {
        alpha_(q) = 0.5 * pi * (x[q] + 1.0);
        s_(q) = std::cos(alpha_(q));
        for (int i = 0; i < n; ++i) test_(q, i) = 0.5 * pi * w[q] * std::cos(i * alpha_(q));
    }
    t_.resize(inner);
    dct_.resize(inner, inner);
    inner_.resize(inner, n);
    for (int r = 0; r < inner; ++r) {
        const double th = (2.0 * r + 1.0) * pi / (2.0 * inner);
        t_(r) = std::cos(th);
        for (int l = 0; l < inner; ++l) dct_(l, r) = (l == 0 ? 1.0 : 2.0) / inner * std::cos(l * th);
        for (int j = 0; j < n; ++j) inner_(r, j) = pi / inner * std::cos(j * th);
    }
}

CMat Quadrature::sample(const std::function<cplx(double, double)>& f) const {
    CMat F(s_.size(), t_.size());
    for (Eigen::Index q = 0; q < s_.size(); ++q)
        for (Eigen::Index r = 0; r < t_.size(); ++r) F(q, r) = f(s_(q), t_(r));
    return F;
}

RMat Quadrature::sample_real(const std::function<double(double, double)>& f) const {
    RMat F(s_.size(), t_.size());
    for (Eigen::Index q = 0; q < s_.size(); ++q)
        for (Eigen::Index r = 0; r < t_.size(); ++r) F(q, r) = f(s_(q), t_(r));
    return F;
}

RMat Quadrature::inner_integrals(LogKind kind, const RMat& coef) const {
    const int M = static_cast<int>(t_.size());
    const int mmax = M + n_;
    std::vector<double> mu(mmax + 1), tmp(mmax + 1);
    RMat out(s_.size(), n_);
    for (Eigen::Index q = 0; q < s_.size(); ++q) {
        const double s = s_(q);
        switch (kind) {
        case LogKind::Diagonal: log_moments(cplx(s), mmax, mu.data()); break;
        case LogKind::Reflected:
            log_moments(cplx(2.0 - s), mmax, mu.data());
            log_moments(cplx(-2.0 - s), mmax, tmp.data());
            for (int m = 0; m <= mmax; ++m) mu[m] += tmp[m];
            break;
        case LogKind::CornerPlus:
            log_moments(cplx(1.0, corner_offset(s)), mmax, mu.data());
            for (auto& v : mu) v *= 2.0;
            break;
        case LogKind::CornerMinus:
            log_moments(cplx(-1.0, corner_offset(-s)), mmax, mu.data());
            for (auto& v : mu) v *= 2.0;
            break;
        }
        // A(s, t) T_j(t) = sum_l a_l (T_{l+j} + T_{|l-j|}) / 2
        for (int j = 0; j < n_; ++j) {
            double acc = 0.0;
            for (int l = 0; l < M; ++l) acc += coef(q, l) * (mu[l + j] + mu[std::abs(l - j)]);
            out(q, j) = 0.5 * acc;
        }
    }
    return out;
}

RMat Quadrature::log_part(LogKind kind, const RMat& A) const {
    const RMat coef = A * dct_.transpose();
    return test_.transpose() * inner_integrals(kind, coef);
}

CMat Quadrature::log_part(LogKind kind, const CMat& A) const {
    const RMat re = log_part(kind, RMat(A.real()));
    const RMat im = log_part(kind, RMat(A.imag()));
    CMat G(n_, n_);
    G.real() = re;
    G.imag() = im;
    return G;
}

RMat Quadrature::smooth_part(const RMat& C) const { return test_.transpose() * C * inner_; }

CMat Quadrature::smooth_part(const CMat& C) const {
    return test_.transpose().cast<cplx>() * C * inner_.cast<cplx>();
}

CVec projection(const std::function<cplx(double)>& f, int n, int m) {
    CVec v = CVec::Zero(n);
    for (int r = 0; r < m; ++r) {
        const double th = (2.0 * r + 1.0) * pi / (2.0 * m);
        const cplx fv = f(std::cos(th)) * (pi / m);
        for (int j = 0; j < n; ++j) v(j) += fv * std::cos(j * th);
    }
    return v;
}

RVec projection_real(const std::function<double(double)>& f, int n, int m) {
    RVec v = RVec::Zero(n);
    for (int r = 0; r < m; ++r) {
        const double th = (2.0 * r + 1.0) * pi / (2.0 * m);
        const double fv = f(std::cos(th)) * (pi / m);
        for (int j = 0; j < n; ++j) v(j) += fv * std::cos(j * th);
    }
    return v;
}

CVec fourier_projection(double w, int n) {
    const int m = 2 * n + static_cast<int>(std::abs(w)) + 32;
    return projection([w](double s) { return std::exp(I * (w * aperture_map(s))); }, n, m);
}

RVec cosine_projection(int m, int n) {
    const int nodes = 2 * n + 2 * m + 32;
    return projection_real([m](double s) { return std::cos(m * pi * (aperture_map(s) + 0.5)); }, n, nodes);
}

RMat constant_kernel(int n) {
    RMat P = RMat::Zero(n, n);
    P(0, 0) = pi * pi;
    return P;
}

} // namespace slitfano::galerkin
