#pragma once
#include <complex>
#include <vector>

namespace slitfano::special {

// sum_{n>=1} sin(n t)/n^2
double clausen2(double t);
// sum_{n>=1} cos(n t)/n^3
double clausen3c(double t);
// sum_{n>=1} sin(n t)/n^4
double clausen4s(double t);

// Smooth parts left after removing the logarithmic terms at the origin.
// clausen2(t) = clausen2_regular(t) - t ln|t|, valid for |t| <= pi.
double clausen2_regular(double t);
// clausen3c(t) = clausen3c_regular(t) + (t^2/2) ln|t|, valid for |t| <= pi.
double clausen3c_regular(double t);
// clausen4s(t) = clausen4s_regular(t) + (t^3/6) ln|t|, valid for |t| <= pi.
double clausen4s_regular(double t);

// The family Cl_n(t) = sum_{m>=1} cos(m t)/m^n (n odd) or sin(m t)/m^n (n even), 1 <= n <= 24.
// On |t| <= pi, Cl_n(t) = clausen_regular(n, t) + clausen_log_coefficient(n) t^(n-1) ln|t|,
// with clausen_regular(n, .) a power series of radius 2 pi.
constexpr int kMaxClausenOrder = 24;
double clausen(int n, double t);
double clausen_regular(int n, double t);
double clausen_log_coefficient(int n);

// ln(sin(u)/u), finite at u = 0, for |u| < pi.
double log_sinc(double u);

double zeta_even(int k); // zeta(2k), k >= 1
double zeta3();

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace slitfano::special
