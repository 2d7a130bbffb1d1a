#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>

#include "adaptive.hpp"
#include "minicubes/arcs.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/oscillatory.hpp"
#include "minicubes/smooth_sets.hpp"

namespace minicubes {

SingularIntegralResult truncated_singular_integral(std::uint64_t n, const Parameters& params,
                                                   SingularIntegralKind kind, double C, double tol) {
  require(n > params.N && n <= 2 * params.N, "singular integral needs n in (N, 2N]");
  require(C > 0.0, "density constant C must be positive");
  require(tol > 0.0, "tolerance must be positive");

  const double P = params.P;
  const double P3 = P * P * P;
  const double B = params.L * P3 / static_cast<double>(params.N);
  const double t = static_cast<double>(n) / P3;
  const double rho3 = std::pow(params.R / P, 3.0);

  double prefactor = 0.0;
  double max_freq = 0.0;
  std::function<std::complex<double>(double)> g;
  auto twist = [t](double b) {
    const double x = -t * b;
    const double r = 2.0 * std::numbers::pi * (x - std::nearbyint(x));
    return std::complex<double>(std::cos(r), std::sin(r));
  };
  if (kind == SingularIntegralKind::J) {
    const auto h0 = static_cast<double>(smooth_set(std::max(params.R, 1.0), params.eta).members.size());
    prefactor = C * h0 * h0 / P;
    max_freq = 16.0 + t;
    g = [twist](double b) {
      const auto v = v_unit(b);
      return v * v * twist(b);
    };
  } else {
    prefactor = params.R * params.R / P;
    max_freq = 16.0 + 2.0 * rho3 + t;
    g = [twist, rho3](double b) {
      const auto w8 = w_unit(8.0 * b);
      const auto w1 = w_unit(b);
      const auto wr = w_unit(rho3 * b);
      return (4.0 * w8 * w8 - w1 * w1) * wr * wr * twist(b);
    };
  }

  const auto n0 = static_cast<std::size_t>(std::clamp(std::ceil(4.0 * B * max_freq), 8.0, 1e6));
  const auto q = detail::adaptive_gk15(g, detail::uniform_breakpoints(-B, B, n0), tol / prefactor,
                                       kQuadraturePanelBudget, "singular integral");
  SingularIntegralResult out;
  out.value = prefactor * q.value.real();
  const double im = prefactor * q.value.imag();
  out.imag_residue = out.value != 0.0 ? std::fabs(im / out.value) : std::fabs(im);
  out.imag_flagged = out.imag_residue > 1e-6;
  out.abs_error_estimate = prefactor * q.abs_error;
  out.panels = q.panels;
  return out;
}

}  // namespace minicubes
