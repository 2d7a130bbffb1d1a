#include "minicubes/oscillatory.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "minicubes/accumulate.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/simd.hpp"
#include "minicubes/smooth_sets.hpp"
#include "minicubes/weyl.hpp"

namespace minicubes {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  std::complex<double> value;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(double beta, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 15> phase{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};
  // Nodes and phases in long double, reduced to one turn before rounding, so
  // that large beta x^3 does not cost phase accuracy.
  auto turns = [beta](long double x) {
    const long double t = static_cast<long double>(beta) * x * x * x;
    return static_cast<double>(t - std::nearbyint(t));
  };
  for (int j = 0; j < 7; ++j) {
    const long double dx = static_cast<long double>(half) * kXgk[j];
    phase[2 * j] = turns(mid - dx);
    phase[2 * j + 1] = turns(mid + dx);
    wk[2 * j] = wk[2 * j + 1] = half * kWgk[j];
    if (j % 2 == 1) wg[2 * j] = wg[2 * j + 1] = half * kWg[j / 2];
  }
  phase[14] = turns(mid);
  wk[14] = half * kWgk[7];
  wg[14] = half * kWg[3];
  const auto& k = simd::active();
  const auto kr = k.weighted_phase_sum(phase, wk);
  const auto ga = k.weighted_phase_sum(phase, wg);
  return {lo, hi, kr, std::abs(kr - ga)};
}

}  // namespace

OscIntegralValue cubic_phase_integral(double beta, double lo, double hi, double tol) {
  require(std::isfinite(beta), "beta must be finite");
  require(lo >= 0.0 && hi >= lo, "integration range must satisfy 0 <= lo <= hi");
  require(tol > 0.0, "tolerance must be positive");
  OscIntegralValue out;
  out.beta = beta;
  if (hi == lo) return out;
  if (beta == 0.0) {
    out.value = hi - lo;
    return out;
  }

  const double t_lo = lo * lo * lo;
  const double t_hi = hi * hi * hi;
  const double cycles = std::fabs(beta) * (t_hi - t_lo);
  const double want = std::max(4.0, std::ceil(2.0 * cycles));
  if (want > static_cast<double>(kQuadraturePanelBudget))
    throw ResourceLimitError("oscillatory integral needs more than the panel budget");
  const auto n0 = static_cast<std::size_t>(want);

  std::priority_queue<Panel> heap;
  double total_err = 0.0;
  double prev = lo;
  for (std::size_t i = 1; i <= n0; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(n0);
    const double x = (i == n0) ? hi : std::cbrt(t);
    if (x <= prev) continue;
    Panel p = gk15(beta, prev, x);
    total_err += p.err;
    heap.push(p);
    prev = x;
  }

  // Phases carry an absolute rounding error of about eps_ld * |beta| x^3 plus
  // one double rounding, so a panel whose estimate is below that floor cannot
  // be improved by splitting.
  const double floor_per_width =
      50.0 * (std::numeric_limits<double>::epsilon() +
              static_cast<double>(std::numeric_limits<long double>::epsilon()) * 2.0 * std::numbers::pi *
                  std::fabs(beta) * t_hi);
  bool floored = false;
  while (total_err > tol) {
    Panel worst = heap.top();
    if (worst.err <= floor_per_width * (worst.hi - worst.lo)) {
      floored = true;
      break;
    }
    if (heap.size() >= kQuadraturePanelBudget)
      throw ConvergenceError("oscillatory integral did not reach tolerance " + std::to_string(tol) +
                             " within the panel budget");
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      heap.push(worst);
      break;
    }
    Panel a = gk15(beta, worst.lo, mid);
    Panel b = gk15(beta, mid, worst.hi);
    total_err += a.err + b.err - worst.err;
    heap.push(a);
    heap.push(b);
  }

  if (floored && total_err > tol)
    throw ConvergenceError("oscillatory integral stalled at error " + std::to_string(total_err) +
                           ", above the requested tolerance, at the rounding floor");

  CompensatedComplexSum acc;
  CompensatedSum err;
  out.panels = heap.size();
  while (!heap.empty()) {
    acc.add(heap.top().value);
    err.add(heap.top().err);
    heap.pop();
  }
  out.value = acc.value();
  out.abs_error_estimate = err.value();
  return out;
}

OscIntegralValue v_integral(double beta, double Z, double tol) {
  require(Z > 0.0, "Z must be positive");
  auto r = cubic_phase_integral(beta, Z, 2.0 * Z, tol);
  r.Z = Z;
  return r;
}

OscIntegralValue w_integral(double beta, double Z, double tol) {
  require(Z > 0.0, "Z must be positive");
  auto r = cubic_phase_integral(beta, 0.0, Z, tol);
  r.Z = Z;
  return r;
}

namespace {

constexpr double kGammaThird = 2.6789385347077476337;

// h with Gamma(a, z) = e^{-z} z^a h, by modified Lentz on the Legendre
// continued fraction; valid for z off the negative real axis.
std::complex<double> upper_gamma_cf(double a, std::complex<double> z) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  std::complex<double> b = z + 1.0 - a;
  std::complex<double> c = 1.0 / kTiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const std::complex<double> del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

}  // namespace

std::complex<double> w_unit(double b) {
  require(std::isfinite(b), "b must be finite");
  if (b < 0.0) return std::conj(w_unit(-b));
  if (b <= 1.0) {
    const std::complex<double> x(0.0, 2.0 * std::numbers::pi * b);
    std::complex<double> term = 1.0;
    std::complex<double> sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= x / static_cast<double>(k);
      const std::complex<double> add = term / static_cast<double>(3 * k + 1);
      sum += add;
      if (std::abs(add) < 1e-18) break;
    }
    return sum;
  }
  const double lambda = 2.0 * std::numbers::pi * b;
  const std::complex<double> whole =
      kGammaThird * std::pow(lambda, -1.0 / 3.0) * std::polar(1.0, std::numbers::pi / 6.0);
  const double frac = b - std::floor(b);
  const std::complex<double> eb = std::polar(1.0, 2.0 * std::numbers::pi * frac);
  const std::complex<double> tail = eb * upper_gamma_cf(1.0 / 3.0, std::complex<double>(0.0, -lambda));
  return (whole - tail) / 3.0;
}

std::complex<double> v_unit(double b) { return 2.0 * w_unit(8.0 * b) - w_unit(b); }

std::complex<double> u_kernel(double beta, double P, std::uint64_t h0, double C, double tol) {
  require(C > 0.0, "density constant C must be positive");
  const auto v = v_integral(beta, P, tol).value;
  const double h = static_cast<double>(h0);
  return C * h * h * v * v;
}

std::complex<double> u_kernel(double beta, const Parameters& params, double C) {
  const auto h0 = smooth_set(std::max(params.R, 1.0), params.eta).members.size();
  return u_kernel(beta, params.P, h0, C);
}

std::complex<double> W_kernel(double beta, double P, double R) {
  require(P > 0.0 && R > 0.0, "P and R must be positive");
  const double P3 = P * P * P;
  const auto w2P = 2.0 * P * w_unit(8.0 * beta * P3);
  const auto wP = P * w_unit(beta * P3);
  const auto wR = R * w_unit(beta * R * R * R);
  return (w2P * w2P - wP * wP) * wR * wR;
}

WKernelForms W_kernel_forms(double beta, double P, double R, double tol) {
  require(P > 0.0 && R > 0.0, "P and R must be positive");
  // The display from the closed form, the identity from quadrature over
  // [0,P] and [P,2P], so that agreement checks two independent routes.
  const auto wR = R * w_unit(beta * R * R * R);
  const auto wP = w_integral(beta, P, tol * P).value;
  const auto vP = v_integral(beta, P, tol * P).value;
  return {W_kernel(beta, P, R), (vP * vP + 2.0 * vP * wP) * wR * wR};
}

double C_heuristic(const Parameters& params) {
  const auto K = spec_K(params);
  return static_cast<double>(K.term_count()) / params.P;
}

}  // namespace minicubes
