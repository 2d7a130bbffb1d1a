#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minicubes/params.hpp"
#include "minicubes/weyl.hpp"

namespace minicubes {

enum class ArcStyle { P, M, N };

ArcStyle parse_arc_style(const std::string& s);
std::string arc_style_name(ArcStyle s);

struct Arc {
  Rational label;
  double center = 0.0;
  double half_width = 0.0;
};

inline constexpr std::size_t kMaxArcs = 5'000'000;

// Major arcs around a/q, 0 <= a < q <= cutoff, gcd(a, q) = 1. The arc at
// 1/1 is folded into the arc at 0/1, so the family lives on the circle [0,1).
//   P: |alpha - a/q| <= L/N, q <= L
//   M: |q alpha - a| <= X/P^3, q <= X
//   N: M with X = P^{3/4}
class ArcDissection {
 public:
  static ArcDissection build(ArcStyle style, const Parameters& params,
                             std::optional<double> cutoff = std::nullopt);

  ArcStyle style() const { return style_; }
  double cutoff() const { return cutoff_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Parameters& params() const { return params_; }
  bool overlapping() const { return overlapping_; }

  // Whether alpha lies on the arc, measured on the circle.
  bool contains(const Arc& arc, double alpha) const;

 private:
  ArcStyle style_ = ArcStyle::M;
  double cutoff_ = 1.0;
  std::vector<Arc> arcs_;
  Parameters params_;
  bool overlapping_ = false;
};

// The clipped pieces of the arcs in [0,1), used for disjointness checks.
struct Interval {
  double lo;
  double hi;
};
std::vector<Interval> arc_pieces(const ArcDissection& d);

std::optional<Rational> arc_membership(double alpha, const ArcDissection& d);
double dissection_measure(const ArcDissection& d);

enum class KernelId { unit, f_star, F_star };

struct IntegrandFactor {
  std::variant<WeylSumSpec, KernelId> source;
  unsigned exponent = 1;
  bool conjugated = false;
};

struct IntegrandTerm {
  double coefficient = 1.0;
  std::vector<IntegrandFactor> factors;
};

// Sum over terms of coefficient * prod factor^exponent, times e(-twist alpha).
struct ArcIntegrand {
  std::vector<IntegrandTerm> terms;
  std::int64_t twist = 0;

  static ArcIntegrand single(std::vector<IntegrandFactor> factors, std::int64_t twist = 0);
  static ArcIntegrand constant_one();
};

struct ArcIntegrationResult {
  std::complex<double> value;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

ArcIntegrationResult integrate_over_arcs(const ArcIntegrand& integrand, const ArcDissection& d,
                                         double tol);

// Average of the integrand over alpha = j/M, j = 0..M-1. For trigonometric
// polynomials of degree < M this equals the integral over [0,1).
std::complex<double> mean_value_grid(const ArcIntegrand& integrand, std::uint64_t grid_points);

// Trigonometric degree of the integrand: max over terms of sum exponent * max
// cube, plus |twist|.
std::uint64_t integrand_degree(const ArcIntegrand& integrand);

inline constexpr std::uint64_t kMaxGridPoints = 50'000'000;

enum class ApproximantKind { f_star, F_star };

// q^-1 S(q,a) v(alpha - a/q; P) or q^-1 S(q,a) w(alpha - a/q; 2P) on the arc
// containing alpha, and 0 off the dissection.
std::complex<double> major_arc_approximant(double alpha, const ArcDissection& d, ApproximantKind kind);

enum class SingularIntegralKind { J, script_J };

struct SingularIntegralResult {
  double value = 0.0;
  double imag_residue = 0.0;  // |Im| / |Re|
  bool imag_flagged = false;
  double abs_error_estimate = 0.0;
  std::size_t panels = 0;
};

// Integral over |beta| <= L/N of u(beta) e(-n beta) (J) or W(beta) e(-n beta)
// (script J), computed in the scaled variable b = beta P^3.
SingularIntegralResult truncated_singular_integral(std::uint64_t n, const Parameters& params,
                                                   SingularIntegralKind kind, double C = 1.0,
                                                   double tol = 1e-9);

}  // namespace minicubes
