#pragma once
#include <Eigen/Dense>
#include <functional>

#include "slitfano/types.hpp"

// Galerkin toolkit on the reference aperture X in (-1/2, 1/2).
//
// The aperture is parametrised by X(s) = sin(pi s / 2) / 2, s in [-1, 1]. A density phi is carried as
// psi(s) = phi(X(s)) X'(s) = sum_j c_j T_j(s) / sqrt(1 - s^2), and the test functions are the same
// weighted Chebyshev functions of s. Matrices are
//     G_ij = int int T_i(s) w(s) K(X(s), X(t)) T_j(t) w(t) ds dt,   w(s) = 1/sqrt(1 - s^2).
// The density vanishes like r^(-1/3) at a right-angle edge; in s it becomes r^(1/3) X' ~ (1 - s)^(1/3),
// which the weighted basis resolves far better than the r^(-1/3) edge in X itself.
namespace slitfano::galerkin {

using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

double aperture_map(double s);            // X(s)
double aperture_map_derivative(double s); // X'(s)

// mu_m = int ln|t - c| T_m(t) dt / sqrt(1 - t^2), m = 0..mmax, for any complex c.
void log_moments(cplx c, int mmax, double* out);

// Logarithms split off exactly by Quadrature::log_part.
//   Diagonal:    ln|s - t|
//   Reflected:   ln|t - (2 - s)| + ln|t + 2 + s|, the zeros of cos(pi (s + t) / 4)
//   CornerPlus:  ln((t - 1)^2 + tau(s)^2), the zeros of 1 - X(s) - X(t) near s = t = 1
//   CornerMinus: the mirror image of CornerPlus, for 1 + X(s) + X(t)
enum class LogKind { Diagonal, Reflected, CornerPlus, CornerMinus };

// ln|X(s) - X(t)| - ln|s - t| - (Reflected logs): analytic on the square.
double distance_log_remainder(double s, double t);
// ln(1 - X(s) - X(t)) - (CornerPlus logs): analytic on the square.
double corner_log_remainder(double s, double t);

// Product-integration rules for one basis size n. Kernels are sampled on outer x inner nodes:
// Gauss-Legendre in the angle s = cos(alpha) outside, Gauss-Chebyshev in t inside.
class Quadrature {
public:
    explicit Quadrature(int n, int outer = 0, int inner = 0);

    int size() const { return n_; }
    const RVec& outer_nodes() const { return s_; }
    const RVec& inner_nodes() const { return t_; }

    // Samples F(q, r) = f(s_q, t_r).
    CMat sample(const std::function<cplx(double, double)>& f) const;
    RMat sample_real(const std::function<double(double, double)>& f) const;

    // Matrix of A(s, t) L(s, t) for the logarithm L of the given kind, A analytic, from samples of A.
    CMat log_part(LogKind kind, const CMat& A) const;
    RMat log_part(LogKind kind, const RMat& A) const;
    // Matrix of an analytic kernel from its samples.
    CMat smooth_part(const CMat& C) const;
    RMat smooth_part(const RMat& C) const;

private:
    RMat inner_integrals(LogKind kind, const RMat& coef) const;

    int n_;
    RVec s_, alpha_;
    RMat test_;  // test_(q, i) = weight_q cos(i alpha_q)
    RVec t_;
    RMat dct_;   // Chebyshev coefficients from inner samples
    RMat inner_; // inner_(r, j) = (pi / m) T_j(t_r)
};

// int f(s) T_j(s) w(s) ds for j < n, Gauss-Chebyshev with m nodes.
CVec projection(const std::function<cplx(double)>& f, int n, int m);
RVec projection_real(const std::function<double(double)>& f, int n, int m);

// <exp(i w X), psi_j>: the moments of exp(i w X(s)).
CVec fourier_projection(double w, int n);

// <cos(m pi (X + 1/2)), psi_j>.
RVec cosine_projection(int m, int n);

// pi^2 e0 e0^T: the matrix of the constant kernel 1.
RMat constant_kernel(int n);

} // namespace slitfano::galerkin
