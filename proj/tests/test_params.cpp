#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "minicubes/errors.hpp"
#include "minicubes/params.hpp"
#include "oracles.hpp"

using namespace minicubes;

TEST_CASE("derive_parameters examples") {
  const auto p = derive_parameters(4, 1.0 / 3.0, 1e-4, 0.1);
  CHECK(p.P == doctest::Approx(1.0));
  CHECK(p.R == doctest::Approx(1.0));
  CHECK(p.Y == doctest::Approx(1.0));
  CHECK(p.J == 0);

  const auto q = derive_parameters(4'000'000, 1.0 / 3.0, 1e-4, 0.1);
  CHECK(q.P == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(q.R == doctest::Approx(100.0).epsilon(1e-12));

  const auto r = derive_parameters(4'000'000, 0.2, 1e-4, 0.1);
  CHECK(r.R == doctest::Approx(15.848931924611).epsilon(1e-10));
  CHECK(r.Y == doctest::Approx(std::pow(100.0, 11.0 / 79.0)).epsilon(1e-12));
  CHECK(r.Y == doctest::Approx(1.899).epsilon(1e-3));
}

TEST_CASE("derive_parameters invariants and clamping") {
  for (std::uint64_t N : {4ULL, 100ULL, 864ULL, 4'000'000ULL, 1'000'000'000ULL}) {
    for (double theta : {0.05, 0.2, 0.25, 0.3, 1.0 / 3.0}) {
      const auto p = derive_parameters(N, theta);
      CHECK(4.0 * p.P * p.P * p.P == doctest::Approx(static_cast<double>(N)).epsilon(1e-12));
      CHECK(p.R <= p.P * (1 + 1e-12));
      CHECK(p.Y >= 1.0);
      CHECK(p.L >= 1.0);
      CHECK(p.L <= static_cast<double>(N));
      CHECK(p.J == static_cast<std::uint64_t>(std::floor(0.5 * p.tau * std::log(p.P))));
    }
  }
  // (ln 100)^10 is about 4.2e6, well above N = 1000: clamp fires
  const auto small = derive_parameters(4000, 0.25);
  CHECK(small.L_clamped);
  CHECK(small.L == doctest::Approx(4000.0));
  const auto big = derive_parameters(4'000'000'000'000ULL, 0.25);
  CHECK_FALSE(big.L_clamped);
  CHECK(big.L == doctest::Approx(std::pow(std::log(big.P), 10)).epsilon(1e-12));

  ParameterOverrides ov;
  ov.L = 7.5;
  CHECK(derive_parameters(4000, 0.25, 1e-4, 0.1, ov).L == 7.5);
  ov.L = 0.5;
  CHECK_THROWS_AS(derive_parameters(4000, 0.25, 1e-4, 0.1, ov), PreconditionError);
  ov.L = 4001;
  CHECK_THROWS_AS(derive_parameters(4000, 0.25, 1e-4, 0.1, ov), PreconditionError);
}

TEST_CASE("derive_parameters rejects bad input") {
  CHECK_THROWS_AS(derive_parameters(3, 0.25), PreconditionError);
  CHECK_THROWS_AS(derive_parameters(100, 0.0), PreconditionError);
  CHECK_THROWS_AS(derive_parameters(100, -0.1), PreconditionError);
  CHECK_THROWS_AS(derive_parameters(100, 0.34), PreconditionError);
  CHECK_THROWS_AS(derive_parameters(100, 0.25, 0.0), PreconditionError);
  CHECK_THROWS_AS(derive_parameters(100, 0.25, 1e-4, 0.0), PreconditionError);
  CHECK_THROWS_AS(derive_parameters(100, 0.25, 1e-4, 1.0), PreconditionError);
  CHECK_NOTHROW(derive_parameters(100, 1.0 / 3.0));
}

TEST_CASE("derive_parameters is bit-reproducible") {
  const auto a = derive_parameters(123456789, 0.3, 2e-3, 0.17);
  const auto b = derive_parameters(123456789, 0.3, 2e-3, 0.17);
  CHECK(std::memcmp(&a.P, &b.P, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.R, &b.R, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.Y, &b.Y, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.L, &b.L, sizeof(double)) == 0);
  CHECK(a.J == b.J);
}

TEST_CASE("integer_cube_root") {
  CHECK(integer_cube_root(0) == 0);
  CHECK(integer_cube_root(27) == 3);
  CHECK(integer_cube_root(26) == 2);
  CHECK(integer_cube_root(1'000'000'000'000'000'000ULL) == 1'000'000);
  CHECK(integer_cube_root(~0ULL) == 2'642'245);
  std::mt19937_64 rng(7);
  auto check = [](std::uint64_t n) {
    const unsigned __int128 c = integer_cube_root(n);
    CHECK(c * c * c <= n);
    CHECK((c + 1) * (c + 1) * (c + 1) > n);
  };
  for (std::uint64_t n = 0; n < 5000; ++n) check(n);
  for (std::uint64_t c = 1; c < 2'642'245; c += 9973) {
    check(c * c * c);
    check(c * c * c - 1);
    check(c * c * c + 1);
  }
  for (int i = 0; i < 20000; ++i) check(rng());
}

TEST_CASE("best_rational examples") {
  CHECK(best_rational(0.5, 10) == Rational{1, 2});
  CHECK(best_rational(0.25, 10) == Rational{1, 4});
  CHECK(best_rational(0.6180339887, 10) == Rational{5, 8});
  CHECK(best_rational(0.0, 10) == Rational{0, 1});
}

TEST_CASE("best_rational matches exhaustive search") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 3000; ++trial) {
    double alpha = U(rng);
    if (trial % 5 == 0) alpha = std::floor(alpha * 96.0) / 97.0 + (trial % 2 ? 1e-9 : 0.0);
    const std::int64_t q_max = 1 + static_cast<std::int64_t>(rng() % 200);
    const Rational r = best_rational(alpha, q_max);
    const auto o = oracle::exhaustive_best(alpha, q_max);
    const long double er = std::fabs(static_cast<long double>(r.q) * alpha - r.a);
    const long double eo = std::fabs(static_cast<long double>(o.q) * alpha - o.a);
    CHECK(r.q <= q_max);
    CHECK(std::gcd(r.a, r.q) == 1);
    CHECK(er <= eo + 1e-15L);
    if (er == eo) CHECK(r.q == o.q);
  }
}

TEST_CASE("nearest_fraction minimises |alpha - a/q|") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double alpha = U(rng);
    const std::int64_t q_max = 1 + static_cast<std::int64_t>(rng() % 60);
    const Rational r = nearest_fraction(alpha, q_max);
    long double best = 2;
    for (std::int64_t q = 1; q <= q_max; ++q) {
      const std::int64_t a = std::llround(q * static_cast<long double>(alpha));
      best = std::min(best, std::fabs(static_cast<long double>(alpha) - static_cast<long double>(a) / q));
    }
    CHECK(std::fabs(static_cast<long double>(alpha) - static_cast<long double>(r.a) / r.q) <= best + 1e-16L);
  }
}

TEST_CASE("tolerant_floor") {
  CHECK(tolerant_floor(std::pow(10.0, std::log(2.0) / std::log(10.0))) == 2);
  CHECK(tolerant_floor(2.5) == 2);
  CHECK(tolerant_floor(2.0) == 2);
  CHECK(tolerant_floor(1.9999) == 1);
}
