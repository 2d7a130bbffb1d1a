#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace minicubes {

// S(q, a) = sum_{r=1}^{q} e(a r^3 / q).
std::complex<double> cubic_gauss_sum(std::uint64_t q, std::int64_t a);

// Number of r mod q with r^3 = c, for c = 0..q-1.
std::vector<std::uint32_t> cube_residue_counts(std::uint64_t q);

struct CongruenceCounter {
  std::uint64_t q = 1;
  std::uint64_t count = 0;
};

inline constexpr std::uint64_t kDefaultRhoCap = 60;

// Solutions y in [1,q]^6 of y1^3 - y2^3 + y3^3 - y4^3 + y5^3 - y6^3 = 0 (mod q).
CongruenceCounter local_count_rho(std::uint64_t q, std::uint64_t cap = kDefaultRhoCap);

// sum_{a=1}^{q} |S(q,a)|^6 with every S(q,a) formed in 50-digit arithmetic.
// The moment reaches ~5e10 at q = 60, past the point where double sums of
// double Gauss sums can resolve 1e-6.
long double gauss_sum_sixth_moment(std::uint64_t q, std::uint64_t cap = kDefaultRhoCap);

double weight_w(std::uint64_t q);

struct SeriesCoefficient {
  double value = 0.0;
  double imag_residue = 0.0;  // |Im| / sum of term magnitudes
  bool imag_flagged = false;
};

inline constexpr double kImagTolerance = 1e-9;

// A(q, n) = sum over a mod q, gcd(a, q) = 1, of (S(q,a)/q)^4 e(-a n / q),
// evaluated directly from its definition.
SeriesCoefficient series_coefficient_A(std::uint64_t q, std::uint64_t n);

struct SeriesTerm {
  std::uint64_t q = 1;
  double A = 0.0;
  double running = 0.0;
};

struct SeriesReport {
  std::uint64_t n = 1;
  std::uint64_t Q_max = 1;
  std::vector<SeriesTerm> partial_sums;
  double value = 0.0;
  double tail_estimate = 0.0;
  bool imag_flagged = false;
};

// Precomputed A(p^k, r) for every prime power p^k <= Q_max and residue r, so
// that truncated series for many n cost O(Q_max) each. Composite q are
// assembled from prime powers by multiplicativity of A in q.
class SingularSeriesTable {
 public:
  explicit SingularSeriesTable(std::uint64_t Q_max);

  std::uint64_t Q_max() const { return Q_max_; }
  double coefficient(std::uint64_t q, std::uint64_t n) const;
  double value(std::uint64_t n) const;
  SeriesReport report(std::uint64_t n) const;
  bool imag_flagged() const { return imag_flagged_; }

 private:
  struct PrimePower {
    std::uint64_t modulus;
    std::vector<double> A;  // indexed by n mod modulus
  };
  void fill_prime_power_values(std::uint64_t n, std::vector<double>& out) const;

  std::uint64_t Q_max_;
  std::vector<PrimePower> prime_powers_;
  // For each q <= Q_max, indices into prime_powers_ of its factorisation.
  std::vector<std::vector<std::uint32_t>> factor_index_;
  bool imag_flagged_ = false;
};

SeriesReport singular_series_truncated(std::uint64_t n, std::uint64_t Q_max);

struct LocalDensity {
  double value = 0.0;
  unsigned k = 0;  // level at which the value was taken
};

inline constexpr std::uint64_t kLocalDensityModulusCap = 4'200'000;

// M(p^k) / p^{3k} with M the number of x in (Z/p^k)^4 satisfying
// x1^3 + x2^3 + x3^3 + x4^3 = n (mod p^k).
double local_count_density(std::uint64_t p, std::uint64_t n, unsigned k);

// The density at the first level where it is provably stable: k = v_p(n)+1,
// or v_3(n)+2 for p = 3 when 3 divides v_3(n). Past that level Hensel lifting multiplies the count
// by exactly p^3 per step.
LocalDensity local_density(std::uint64_t p, std::uint64_t n, unsigned k_max);

// Product of local densities over primes p <= p_max.
double euler_product(std::uint64_t n, std::uint64_t p_max);

// Gamma(4/3)^2 / Gamma(2/3).
double gamma_constant();

double main_term(std::uint64_t n, double theta, std::uint64_t Q_max);
double main_term(std::uint64_t n, double theta, const SingularSeriesTable& table);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace minicubes
