#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "minicubes/accumulate.hpp"
#include "minicubes/errors.hpp"

namespace minicubes::detail {

struct QuadratureOutcome {
  std::complex<double> value;
  double abs_error = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

inline constexpr std::array<double, 8> kGkNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kGkWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkPanel {
  double lo;
  double hi;
  std::complex<double> value;
  double err;
  bool operator<(const GkPanel& o) const { return err < o.err; }
};

template <typename F>
GkPanel gk15_panel(F& f, double lo, double hi, double scale_floor) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const std::complex<double> fc = f(mid);
  std::complex<double> kr = kGkWeights[7] * fc;
  std::complex<double> ga = kGaussWeights[3] * fc;
  double mag = kGkWeights[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGkNodes[j];
    const std::complex<double> s = f(mid - dx) + f(mid + dx);
    kr += kGkWeights[j] * s;
    mag += kGkWeights[j] * std::abs(s);
    if (j % 2 == 1) ga += kGaussWeights[j / 2] * s;
  }
  kr *= half;
  ga *= half;
  const double err = std::abs(kr - ga);
  // Differences at the rounding level of the panel are not refinable.
  const double floor = scale_floor * half * mag;
  return {lo, hi, kr, err <= floor ? 0.0 : err};
}

// Global adaptive Gauss-Kronrod 7/15 over consecutive panels given by
// breakpoints, bisecting the worst panel until the summed error estimate is
// at most tol.
template <typename F>
QuadratureOutcome adaptive_gk15(F&& f, const std::vector<double>& breakpoints, double tol,
                                std::size_t budget, const std::string& what) {
  constexpr double kRoundoff = 50.0 * 2.220446049250313e-16;
  std::priority_queue<GkPanel> heap;
  double total_err = 0.0;
  std::size_t evals = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    GkPanel p = gk15_panel(f, breakpoints[i], breakpoints[i + 1], kRoundoff);
    evals += 15;
    total_err += p.err;
    heap.push(p);
  }
  while (!heap.empty() && total_err > tol) {
    GkPanel worst = heap.top();
    if (worst.err == 0.0) break;
    if (heap.size() >= budget)
      throw ConvergenceError(what + ": tolerance not reached within the panel budget");
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;
    heap.pop();
    GkPanel a = gk15_panel(f, worst.lo, mid, kRoundoff);
    GkPanel b = gk15_panel(f, mid, worst.hi, kRoundoff);
    evals += 30;
    total_err += a.err + b.err - worst.err;
    heap.push(a);
    heap.push(b);
  }
  // Sum in increasing position so the result does not depend on heap order.
  std::vector<GkPanel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const GkPanel& x, const GkPanel& y) { return x.lo < y.lo; });
  CompensatedComplexSum acc;
  CompensatedSum err;
  for (const auto& p : panels) {
    acc.add(p.value);
    err.add(p.err);
  }
  return {acc.value(), err.value(), panels.size(), evals};
}

inline std::vector<double> uniform_breakpoints(double lo, double hi, std::size_t n) {
  std::vector<double> b(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    b[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  b[n] = hi;
  return b;
}

}  // namespace minicubes::detail
