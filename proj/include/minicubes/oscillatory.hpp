#pragma once

#include <complex>
#include <cstdint>

#include "minicubes/params.hpp"

namespace minicubes {

struct OscIntegralValue {
  double beta = 0.0;
  double Z = 0.0;
  std::complex<double> value;
  double abs_error_estimate = 0.0;
  std::size_t panels = 0;
};

inline constexpr std::size_t kQuadraturePanelBudget = 2'000'000;

// Integral of e(beta g^3) dg over [lo, hi] by adaptive Gauss-Kronrod
// quadrature; initial panels are equal steps in g^3 so each holds about half
// an oscillation.
OscIntegralValue cubic_phase_integral(double beta, double lo, double hi, double tol);

// v(beta; Z): integral over [Z, 2Z].
OscIntegralValue v_integral(double beta, double Z, double tol = 1e-10);
// w(beta; Z): integral over [0, Z].
OscIntegralValue w_integral(double beta, double Z, double tol = 1e-10);

// Closed forms of w(b; 1) and v(b; 1) through the incomplete gamma function.
std::complex<double> w_unit(double b);
std::complex<double> v_unit(double b);

// C h(0)^2 v(beta; P)^2 with h(0) = |A(R)|.
std::complex<double> u_kernel(double beta, const Parameters& params, double C);
std::complex<double> u_kernel(double beta, double P, std::uint64_t h0, double C, double tol = 1e-10);

struct WKernelForms {
  std::complex<double> display;   // (w(2P)^2 - w(P)^2) w(R)^2
  std::complex<double> identity;  // (v(P)^2 + 2 v(P) w(P)) w(R)^2
};

// The identity form integrates v(P) and w(P) numerically to tol * P.
WKernelForms W_kernel_forms(double beta, double P, double R, double tol = 1e-11);
std::complex<double> W_kernel(double beta, double P, double R);

// Heuristic density constant K(0) / v(0; P) = |K-index set| / P.
double C_heuristic(const Parameters& params);

}  // namespace minicubes
