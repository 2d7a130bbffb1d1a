#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>

#include "minicubes/errors.hpp"
#include "minicubes/exp_sums.hpp"
#include "oracles.hpp"

using namespace minicubes;

namespace {

double dist(std::complex<double> a, oracle::cld b) {
  return static_cast<double>(std::abs(oracle::cld(a.real(), a.imag()) - b));
}

}  // namespace

TEST_CASE("cubic_gauss_sum examples") {
  CHECK(std::abs(cubic_gauss_sum(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(cubic_gauss_sum(2, 1)) < 1e-15);
  CHECK(std::abs(cubic_gauss_sum(3, 1)) < 1e-14);
  const auto s9 = cubic_gauss_sum(9, 1);
  CHECK(s9.real() == doctest::Approx(3 + 6 * std::cos(2 * std::numbers::pi / 9)).epsilon(1e-14));
  CHECK(std::fabs(s9.imag()) < 1e-13);
}

TEST_CASE("cubic_gauss_sum matches the term-by-term oracle") {
  for (std::uint64_t q = 1; q <= 120; ++q)
    for (std::int64_t a = -3; a <= static_cast<std::int64_t>(q) + 2; ++a)
      CHECK(dist(cubic_gauss_sum(q, a), oracle::gauss_sum(q, a)) < q * 1e-14);
}

TEST_CASE("S(q,a) value, conjugation, magnitude bound") {
  for (std::uint64_t q = 1; q <= 200; ++q) {
    CHECK(std::abs(cubic_gauss_sum(q, static_cast<std::int64_t>(q)) - static_cast<double>(q)) < 1e-12);
    for (std::uint64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const auto s = cubic_gauss_sum(q, static_cast<std::int64_t>(a));
      const auto t = cubic_gauss_sum(q, static_cast<std::int64_t>(q - a));
      CHECK(std::abs(s - std::conj(t)) < 1e-12);
    }
  }
  double worst = 0;
  for (std::uint64_t q = 1; q <= 500; ++q)
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double m = std::abs(cubic_gauss_sum(q, static_cast<std::int64_t>(a)));
      CHECK(m <= q + 1e-9);
      worst = std::max(worst, m / std::pow(static_cast<double>(q), 2.0 / 3.0));
    }
  INFO("max |S(q,a)| / q^(2/3) over q <= 500: " << worst);
  CHECK(worst <= 4.0);
}

TEST_CASE("weight domination |S(q,a)/q| <= w(q) for q <= 500" * doctest::test_suite("disputed")) {
  // Stated with implied constant 1. At q = 9 the sum is 3 + 6cos(2 pi/9)
  // against w(9) = 1/3, so the ratio is about 2.53; the max is reported.
  double worst = 0;
  std::uint64_t worst_q = 0;
  for (std::uint64_t q = 1; q <= 500; ++q)
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double r = std::abs(cubic_gauss_sum(q, static_cast<std::int64_t>(a))) / q / weight_w(q);
      if (r > worst) {
        worst = r;
        worst_q = q;
      }
    }
  INFO("max ratio " << worst << " at q = " << worst_q);
  CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("weight domination holds with a bounded constant") {
  double worst = 0;
  for (std::uint64_t q = 1; q <= 500; ++q)
    for (std::uint64_t a = 1; a <= q; ++a)
      if (std::gcd(a, q) == 1)
        worst = std::max(worst, std::abs(cubic_gauss_sum(q, static_cast<std::int64_t>(a))) / q / weight_w(q));
  INFO("max ratio " << worst);
  CHECK(worst < 3.0);
}

TEST_CASE("weight_w examples and multiplicativity") {
  CHECK(weight_w(1) == 1.0);
  CHECK(weight_w(2) == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(weight_w(8) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(weight_w(12) == doctest::Approx(0.5 * 3.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(weight_w(12) == doctest::Approx(0.8660254).epsilon(1e-7));
  for (std::uint64_t a = 1; a <= 60; ++a)
    for (std::uint64_t b = 1; b <= 60; ++b)
      if (std::gcd(a, b) == 1) CHECK(weight_w(a * b) == doctest::Approx(weight_w(a) * weight_w(b)).epsilon(1e-13));
}

TEST_CASE("local_count_rho examples and six-loop oracle") {
  CHECK(local_count_rho(1).count == 1);
  CHECK(local_count_rho(2).count == 32);
  CHECK(local_count_rho(3).count == 243);
  for (std::uint64_t q = 1; q <= 12; ++q) CHECK(local_count_rho(q).count == oracle::rho_six_loops(q));
  CHECK_THROWS_AS(local_count_rho(61), ResourceLimitError);
  CHECK_NOTHROW(local_count_rho(61, 61));
}

TEST_CASE("sixth-moment identity for q <= 60") {
  for (std::uint64_t q = 1; q <= 60; ++q) {
    long double moment = 0;
    for (std::uint64_t a = 1; a <= q; ++a) moment += std::pow(std::abs(oracle::gauss_sum(q, static_cast<std::int64_t>(a))), 6.0L);
    CHECK(std::fabs(static_cast<long double>(q) * local_count_rho(q).count - moment) <= 1e-6L * std::max(1.0L, moment) );
  }
}

TEST_CASE("extended-precision sixth moment resolves the identity to 1e-6") {
  for (std::uint64_t q : {1ULL, 2ULL, 9ULL, 45ULL, 49ULL, 54ULL, 60ULL})
    CHECK(std::fabs(static_cast<long double>(q * local_count_rho(q).count) - gauss_sum_sixth_moment(q)) <= 1e-6L);
  CHECK_THROWS_AS(gauss_sum_sixth_moment(61), ResourceLimitError);
}

TEST_CASE("cube_residue_counts sum to q") {
  for (std::uint64_t q = 1; q <= 300; ++q) {
    const auto c = cube_residue_counts(q);
    REQUIRE(c.size() == q);
    CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == q);
  }
}

TEST_CASE("series_coefficient_A examples") {
  for (std::uint64_t n : {1ULL, 2ULL, 7ULL, 1000ULL}) {
    CHECK(series_coefficient_A(1, n).value == doctest::Approx(1.0));
    CHECK(std::fabs(series_coefficient_A(2, n).value) < 1e-14);
    CHECK(std::fabs(series_coefficient_A(3, n).value) < 1e-14);
  }
  const auto a94 = series_coefficient_A(9, 4);
  const auto o94 = oracle::series_A(9, 4);
  CHECK(a94.value == doctest::Approx(static_cast<double>(o94.real())).epsilon(1e-12));
  CHECK_FALSE(a94.imag_flagged);
}

TEST_CASE("series_coefficient_A matches oracle, stays real") {
  for (std::uint64_t q = 1; q <= 40; ++q)
    for (std::uint64_t n = 1; n <= 2 * q + 3; ++n) {
      const auto a = series_coefficient_A(q, n);
      const auto o = oracle::series_A(q, n);
      CHECK(std::fabs(a.value - static_cast<double>(o.real())) < 1e-12);
      CHECK(a.imag_residue < kImagTolerance);
      CHECK_FALSE(a.imag_flagged);
    }
}

TEST_CASE("A(q,n) multiplicative for coprime q1, q2 <= 50, n <= 100") {
  // Definitional A(q, n) for every n <= 100 from one pass of Gauss sums.
  std::map<std::uint64_t, std::vector<double>> cache;
  auto A_all = [&](std::uint64_t q) -> const std::vector<double>& {
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> z4;
    std::vector<std::uint64_t> units;
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const auto z = cubic_gauss_sum(q, static_cast<std::int64_t>(a)) / static_cast<double>(q);
      z4.push_back((z * z) * (z * z));
      units.push_back(a);
    }
    std::vector<double> out(101);
    for (std::uint64_t n = 1; n <= 100; ++n) {
      if (n > q && q <= 100) {
        out[n] = out[(n - 1) % q + 1];
        continue;
      }
      std::complex<double> s = 0;
      for (std::size_t i = 0; i < units.size(); ++i)
        s += z4[i] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(units[i] * n % q) / q);
      out[n] = s.real();
    }
    return cache.emplace(q, std::move(out)).first->second;
  };
  double worst = 0;
  for (std::uint64_t q1 = 2; q1 <= 50; ++q1)
    for (std::uint64_t q2 = q1 + 1; q2 <= 50; ++q2) {
      if (std::gcd(q1, q2) != 1) continue;
      const auto& a1 = A_all(q1);
      const auto& a2 = A_all(q2);
      const auto& a12 = A_all(q1 * q2);
      for (std::uint64_t n = 1; n <= 100; ++n) worst = std::max(worst, std::fabs(a12[n] - a1[n] * a2[n]));
    }
  INFO("max |A(q1 q2) - A(q1) A(q2)| = " << worst);
  CHECK(worst <= 1e-9);
}

TEST_CASE("SingularSeriesTable agrees with the definitional route") {
  const SingularSeriesTable table(300);
  CHECK_FALSE(table.imag_flagged());
  std::mt19937_64 rng(3);
  for (std::uint64_t q = 1; q <= 300; ++q)
    for (int i = 0; i < 3; ++i) {
      const std::uint64_t n = 1 + rng() % 100000;
      CHECK(table.coefficient(q, n) == doctest::Approx(series_coefficient_A(q, n).value).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("singular_series_truncated examples and report invariants") {
  for (std::uint64_t n : {4ULL, 5ULL, 99ULL}) {
    CHECK(singular_series_truncated(n, 1).value == doctest::Approx(1.0));
    CHECK(singular_series_truncated(n, 3).value == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto rep = singular_series_truncated(4, 2000);
  REQUIRE(rep.partial_sums.size() == 2000);
  CHECK(rep.value == rep.partial_sums.back().running);
  CHECK(rep.value > 0);
  CHECK(rep.tail_estimate >= 0);
  // The partial sums still swing by a few hundredths at Q = 2000 (0.054 at
  // Q = 300, 0.082 at 2000, 0.073 at 3000), so only coarse agreement with
  // the product, which sits at 0.0568, is expected here.
  INFO("series " << rep.value << " tail " << rep.tail_estimate);
  CHECK(std::fabs(rep.value - euler_product(4, 2000)) < 0.05);
  double running = 0;
  for (const auto& t : rep.partial_sums) {
    running += t.A;
    CHECK(t.running == doctest::Approx(running).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("local densities against brute-force counts") {
  // cubing is a bijection mod 5, so level 1 always gives 1
  for (std::uint64_t n = 1; n <= 60; ++n) {
    if (n % 5 != 0) {
      CHECK(local_density(5, n, 2).value == doctest::Approx(1.0).epsilon(1e-15));
    } else if (n % 25 != 0) {
      // 5 || n needs level 2, where cubes of multiples of 5 collapse to 0
      const double brute = static_cast<double>(oracle::four_cube_solutions(25, n)) / (25.0 * 25 * 25);
      CHECK(local_density(5, n, 2).value == doctest::Approx(brute).epsilon(1e-15));
    } else {
      CHECK_THROWS_AS(local_density(5, n, 2), ConvergenceError);
      const double brute = static_cast<double>(oracle::four_cube_solutions(125, n)) / (125.0 * 125 * 125);
      CHECK(local_density(5, n, 3).value == doctest::Approx(brute).epsilon(1e-14));
    }
  }
  CHECK(local_count_density(7, 1, 1) ==
        doctest::Approx(static_cast<double>(oracle::four_cube_solutions(7, 1)) / (7.0 * 7 * 7)));
  CHECK(local_count_density(7, 1, 2) ==
        doctest::Approx(static_cast<double>(oracle::four_cube_solutions(49, 1)) / (49.0 * 49 * 49)));
  // level 3 has no loop oracle within budget; it must agree with the stable level
  const auto d7 = local_density(7, 1, 3);
  CHECK(d7.value == doctest::Approx(local_count_density(7, 1, 1)).epsilon(1e-12));
  CHECK(local_count_density(7, 1, 3) == doctest::Approx(local_count_density(7, 1, 2)).epsilon(1e-12));
  for (unsigned k = 1; k <= 4; ++k) {
    const std::uint64_t m = static_cast<std::uint64_t>(std::pow(3, k));
    if (m <= 27)
      CHECK(local_count_density(3, 4, k) ==
            doctest::Approx(static_cast<double>(oracle::four_cube_solutions(m, 4)) / (double(m) * m * m)));
  }
  CHECK(local_density(3, 4, 4).value > 0);
}

TEST_CASE("local densities do not move past the stable level") {
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL})
    for (std::uint64_t n = 1; n <= 60; ++n) {
      const auto d = local_density(p, n, 8);
      for (unsigned k = d.k + 1; std::pow(double(p), k) <= 2200; ++k) {
        INFO("p = " << p << " n = " << n << " k = " << k);
        CHECK(local_count_density(p, n, k) == doctest::Approx(d.value).epsilon(1e-12));
      }
    }
}

TEST_CASE("local_density reports levels beyond reach") {
  CHECK_THROWS_AS(local_density(5, 125, 2), ConvergenceError);
  CHECK_THROWS_AS(local_density(4, 1, 3), PreconditionError);
}

TEST_CASE("Gamma constant against the independent oracle") {
  const long double g = oracle::gamma(4.0L / 3) * oracle::gamma(4.0L / 3) / oracle::gamma(2.0L / 3);
  CHECK(std::fabs(gamma_constant() - g) < 1e-12L);
  CHECK(oracle::gamma(4.0L / 3) == doctest::Approx(static_cast<double>(oracle::gamma(1.0L / 3) / 3)).epsilon(1e-15));
  CHECK(gamma_constant() == doctest::Approx(0.58887958342848334).epsilon(1e-15));
}

TEST_CASE("main_term composition") {
  const double c = gamma_constant();
  CHECK(main_term(1000, 1.0 / 6.0, 500) == doctest::Approx(c * singular_series_truncated(1000, 500).value).epsilon(1e-12));
  const double expect = c * singular_series_truncated(1'000'000, 2000).value * std::pow(1e6, 0.6 - 1.0 / 3.0);
  CHECK(main_term(1'000'000, 0.3, 2000) == doctest::Approx(expect).epsilon(1e-12));
  const SingularSeriesTable table(2000);
  CHECK(main_term(1'000'000, 0.3, table) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(main_term(1, 0.3, 10), PreconditionError);
}

TEST_CASE("primes") {
  const auto ps = primes_up_to(1000);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t n = 0; n <= 1000; ++n)
    if (oracle::is_prime(n)) expect.push_back(n);
  CHECK(ps == expect);
  for (std::uint64_t n = 0; n < 3000; ++n) CHECK(is_prime(n) == oracle::is_prime(n));
}
