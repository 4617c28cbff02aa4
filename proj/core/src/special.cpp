#include "slitfano/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "slitfano/types.hpp"

namespace slitfano::special {

namespace {

constexpr int kZetaTerms = 40;

const std::array<double, kZetaTerms + 1>& zeta_table() {
    static const std::array<double, kZetaTerms + 1> table = [] {
        std::array<double, kZetaTerms + 1> t{};
        for (int k = 1; k <= kZetaTerms; ++k) t[k] = std::riemann_zeta(2.0 * k);
        return t;
    }();
    return table;
}

double wrap_to_pi(double t) {
    const double two_pi = 2.0 * pi;
    return t - two_pi * std::nearbyint(t / two_pi);
}

} // namespace

double zeta_even(int k) {
    if (k >= 1 && k <= kZetaTerms) return zeta_table()[k];
    return std::riemann_zeta(2.0 * k);
}

double zeta3() {
    static const double z3 = std::riemann_zeta(3.0);
    return z3;
}

// Power series of the Clausen functions about the origin; the ratio of
// successive terms is (t / 2pi)^2 <= 1/4 on |t| <= pi.
double clausen2_regular(double t) {
    const double r = t / (2.0 * pi);
    const double r2 = r * r;
    double p = t;
    double sum = t;
    for (int k = 1; k <= kZetaTerms; ++k) {
        p *= r2;
        const double term = zeta_even(k) / (k * (2.0 * k + 1.0)) * p;
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

double clausen3c_regular(double t) {
    const double r = t / (2.0 * pi);
    const double r2 = r * r;
    double p = t * t;
    double sum = zeta3() - 0.75 * t * t;
    for (int k = 1; k <= kZetaTerms; ++k) {
        p *= r2;
        const double term = zeta_even(k) / (k * (2.0 * k + 1.0) * (2.0 * k + 2.0)) * p;
        sum -= term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

double clausen4s_regular(double t) {
    const double r = t / (2.0 * pi);
    const double r2 = r * r;
    double p = t * t * t;
    double sum = zeta3() * t - (11.0 / 36.0) * p;
    for (int k = 1; k <= kZetaTerms; ++k) {
        p *= r2;
        const double term =
            zeta_even(k) / (k * (2.0 * k + 1.0) * (2.0 * k + 2.0) * (2.0 * k + 3.0)) * p;
        sum -= term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

double clausen2(double t) {
    const double u = wrap_to_pi(t);
    if (u == 0.0) return 0.0;
    return clausen2_regular(u) - u * std::log(std::abs(u));
}

double clausen3c(double t) {
    const double u = wrap_to_pi(t);
    if (u == 0.0) return zeta3();
    return clausen3c_regular(u) + 0.5 * u * u * std::log(std::abs(u));
}

double clausen4s(double t) {
    const double u = wrap_to_pi(t);
    if (u == 0.0) return 0.0;
    return clausen4s_regular(u) + u * u * u * std::log(std::abs(u)) / 6.0;
}

namespace {

constexpr int kClausenTerms = 64;

struct ClausenTable {
    std::array<std::array<double, kClausenTerms>, kMaxClausenOrder + 1> coef{};
    std::array<double, kMaxClausenOrder + 1> log_coef{};
};

// Cl_1 = -ln|t| + sum zeta(2m) t^(2m) / (m (2 pi)^(2m)); then alternately
// Cl_{2m} = int_0^t Cl_{2m-1} and Cl_{2m+1} = zeta(2m+1) - int_0^t Cl_{2m}.
const ClausenTable& clausen_table() {
    static const ClausenTable table = [] {
        ClausenTable t;
        auto& c1 = t.coef[1];
        double r = 1.0;
        for (int m = 1; 2 * m < kClausenTerms; ++m) {
            r /= (2.0 * pi) * (2.0 * pi);
            c1[2 * m] = zeta_even(m) * r / m;
        }
        t.log_coef[1] = -1.0;
        for (int n = 2; n <= kMaxClausenOrder; ++n) {
            const auto& prev = t.coef[n - 1];
            auto& cur = t.coef[n];
            for (int k = 0; k + 1 < kClausenTerms; ++k) cur[k + 1] = prev[k] / (k + 1);
            const int j = n - 2; // log term of Cl_{n-1} is t^j ln|t|
            t.log_coef[n] = t.log_coef[n - 1] / (j + 1);
            cur[j + 1] -= t.log_coef[n - 1] / ((j + 1.0) * (j + 1.0));
            if (n % 2 == 1) {
                for (auto& c : cur) c = -c;
                t.log_coef[n] = -t.log_coef[n];
                cur[0] = std::riemann_zeta(static_cast<double>(n));
            }
        }
        return t;
    }();
    return table;
}

} // namespace

double clausen_regular(int n, double t) {
    if (n < 1 || n > kMaxClausenOrder) throw Error(ErrorKind::InvalidArgument, "clausen order out of range");
    const auto& c = clausen_table().coef[n];
    double sum = 0.0;
    for (int k = kClausenTerms - 1; k >= 0; --k) sum = sum * t + c[k];
    return sum;
}

double clausen_log_coefficient(int n) {
    if (n < 1 || n > kMaxClausenOrder) throw Error(ErrorKind::InvalidArgument, "clausen order out of range");
    return clausen_table().log_coef[n];
}

double clausen(int n, double t) {
    const double u = wrap_to_pi(t);
    const double reg = clausen_regular(n, u);
    if (u == 0.0) {
        if (n == 1) return std::numeric_limits<double>::infinity();
        return reg;
    }
    return reg + clausen_log_coefficient(n) * std::pow(u, n - 1) * std::log(std::abs(u));
}

double log_sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return -u2 / 6.0 - u2 * u2 / 180.0;
    }
    return std::log(std::sin(u) / u);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = z; p0 = 1.0; }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

} // namespace slitfano::special
