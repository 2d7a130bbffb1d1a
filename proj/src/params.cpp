#include "minicubes/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "minicubes/errors.hpp"

namespace minicubes {

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

// alpha in [0,1) as m / 2^s exactly, reduced.
struct Dyadic {
  std::int64_t m = 0;
  int s = 0;
};

Dyadic to_dyadic(double alpha) {
  int e = 0;
  const double mant = std::frexp(alpha, &e);
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  int s = 53 - e;
  if (m == 0) return {0, 0};
  const int tz = std::countr_zero(static_cast<std::uint64_t>(m));
  const int drop = std::min(tz, s);
  return {m >> drop, s - drop};
}

struct Convergent {
  i128 p;
  i128 q;
};

// Convergents of m/2^s with denominators up to q_max, plus the
// predecessor needed for the semiconvergent step.
struct ConvergentChain {
  Convergent prev{1, 0};
  Convergent last{0, 1};
  i128 next_quotient = 0;  // 0 when the expansion terminated at `last`
};

ConvergentChain convergents(const Dyadic& d, std::int64_t q_max) {
  i128 num = d.m;
  i128 den = static_cast<i128>(1) << d.s;
  ConvergentChain c;
  // First partial quotient.
  i128 a = num / den;
  c.prev = {1, 0};
  c.last = {a, 1};
  num -= a * den;
  while (num != 0) {
    // Continue with den/num.
    const i128 next_a = den / num;
    const i128 q_next = next_a * c.last.q + c.prev.q;
    if (q_next > q_max) {
      c.next_quotient = next_a;
      return c;
    }
    const Convergent nxt{next_a * c.last.p + c.prev.p, q_next};
    c.prev = c.last;
    c.last = nxt;
    const i128 rem = den - next_a * num;
    den = num;
    num = rem;
  }
  c.next_quotient = 0;
  return c;
}

constexpr int kTinyShift = 90;
constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 31;

void check_inputs(double alpha, std::int64_t q_max) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0,1)");
  require(q_max >= 1, "q_max must be at least 1");
  require(q_max <= kMaxDenominator, "q_max above 2^31 is not supported");
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t tolerant_floor(double x) {
  const double f = std::floor(x);
  if ((f + 1.0) - x <= 1e-12 * std::max(1.0, std::fabs(x))) return static_cast<std::int64_t>(f) + 1;
  return static_cast<std::int64_t>(f);
}

Parameters derive_parameters(std::uint64_t N, double theta, double tau, double eta,
                             const ParameterOverrides& overrides) {
  require(N >= 4, "N must be at least 4");
  require(theta > 0.0 && theta <= 1.0 / 3.0 + 1e-15, "theta must lie in (0, 1/3]");
  require(tau > 0.0, "tau must be positive");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");

  Parameters p;
  p.N = N;
  p.theta = theta;
  p.eta = eta;
  p.tau = tau;
  p.P = std::cbrt(static_cast<double>(N) / 4.0);
  p.R = std::pow(p.P, 3.0 * theta);
  p.Y = std::pow(p.P, 11.0 / 79.0);
  const double logP = std::log(p.P);
  p.J = static_cast<std::uint64_t>(std::floor(0.5 * tau * logP));

  if (overrides.L) {
    require(*overrides.L >= 1.0 && *overrides.L <= static_cast<double>(N),
            "L override must satisfy 1 <= L <= N");
    p.L = *overrides.L;
  } else {
    const double L = std::pow(logP, 10.0);
    const double hi = static_cast<double>(N);
    p.L = std::clamp(L, 1.0, hi);
    p.L_clamped = (p.L != L);
  }
  if (overrides.Y) {
    require(*overrides.Y >= 1.0, "Y override must be at least 1");
    p.Y = *overrides.Y;
  }
  if (overrides.J) p.J = *overrides.J;
  return p;
}

std::uint64_t integer_cube_root(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  auto cube = [](std::uint64_t x) {
    return static_cast<unsigned __int128>(x) * x * x;
  };
  while (r > 0 && cube(r) > n) --r;
  while (cube(r + 1) <= n) ++r;
  return r;
}

Rational best_rational(double alpha, std::int64_t q_max) {
  check_inputs(alpha, q_max);
  const Dyadic d = to_dyadic(alpha);
  if (d.m == 0) return {0, 1};
  // Below 2^-37 every q <= 2^31 has q alpha < 1/2, so a = 0 and q = 1 wins.
  if (d.s > kTinyShift) return {0, 1};

  const ConvergentChain c = convergents(d, q_max);
  const i128 D = static_cast<i128>(1) << d.s;
  // Convergents are the best approximations of the second kind. The only
  // possible tie is with the predecessor, which has the smaller denominator.
  const i128 err_last = abs128(c.last.q * d.m - c.last.p * D);
  if (c.prev.q >= 1) {
    const i128 err_prev = abs128(c.prev.q * d.m - c.prev.p * D);
    if (err_prev <= err_last) return {static_cast<std::int64_t>(c.prev.p), static_cast<std::int64_t>(c.prev.q)};
  }
  return {static_cast<std::int64_t>(c.last.p), static_cast<std::int64_t>(c.last.q)};
}

Rational nearest_fraction(double alpha, std::int64_t q_max) {
  check_inputs(alpha, q_max);
  const Dyadic d = to_dyadic(alpha);
  if (d.m == 0) return {0, 1};
  if (d.s > kTinyShift) return {0, 1};

  const ConvergentChain c = convergents(d, q_max);
  const i128 D = static_cast<i128>(1) << d.s;
  Convergent best = c.last;
  if (c.next_quotient > 0) {
    // Largest admissible semiconvergent between prev and the next convergent.
    const i128 t = (q_max - c.prev.q) / c.last.q;
    if (t >= 1) {
      const Convergent semi{c.prev.p + t * c.last.p, c.prev.q + t * c.last.q};
      // |alpha - a/q| compared as |q m - a D| / q, cross-multiplied.
      const i128 e_last = abs128(c.last.q * d.m - c.last.p * D);
      const i128 e_semi = abs128(semi.q * d.m - semi.p * D);
      if (e_semi * c.last.q < e_last * semi.q) best = semi;
    }
  }
  return {static_cast<std::int64_t>(best.p), static_cast<std::int64_t>(best.q)};
}

}  // namespace minicubes
