#pragma once

#include <cstdint>
#include <optional>

namespace minicubes {

struct Parameters {
  std::uint64_t N = 4;
  double theta = 1.0 / 3.0;
  double P = 1.0;
  double R = 1.0;
  double Y = 1.0;
  double L = 1.0;
  double eta = 0.1;
  double tau = 1e-4;
  std::uint64_t J = 0;
  // Set when the default L = (ln P)^10 was pulled into [1, N].
  bool L_clamped = false;
};

struct ParameterOverrides {
  std::optional<double> L;
  // Toy experiments need prime ranges the default Y = P^(11/79) cannot reach.
  std::optional<double> Y;
  std::optional<std::uint64_t> J;
};

inline constexpr double kDefaultEta = 0.1;
inline constexpr double kDefaultTau = 1e-4;

Parameters derive_parameters(std::uint64_t N, double theta, double tau = kDefaultTau,
                             double eta = kDefaultEta, const ParameterOverrides& overrides = {});

struct Rational {
  std::int64_t a = 0;
  std::int64_t q = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

std::uint64_t integer_cube_root(std::uint64_t n);

// (a, q) with q <= q_max minimising |q alpha - a|; ties go to the smaller q.
Rational best_rational(double alpha, std::int64_t q_max);

// (a, q) with q <= q_max minimising |alpha - a/q|; ties go to the smaller q.
Rational nearest_fraction(double alpha, std::int64_t q_max);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// floor(x), treating values within a relative 1e-12 below an integer as that
// integer. Bounds like 10^(log 2 / log 10) must land on 2, not 1.
std::int64_t tolerant_floor(double x);

}  // namespace minicubes
