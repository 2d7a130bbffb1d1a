#pragma once

#include <cstdint>
#include <vector>

namespace minicubes {

struct SmoothSet {
  double bound_low = 0.0;   // members m satisfy bound_low < m (0 for A(R)-style sets)
  double bound_high = 1.0;  // and m <= bound_high
  double prime_cap = 1.0;   // every prime factor is <= prime_cap
  std::vector<std::uint64_t> members;  // strictly increasing
};

// A(R): 1 <= m <= R with all prime factors <= R^eta.
SmoothSet smooth_set(double R, double eta);

// A*(X, Z): 1 <= m <= X with all prime factors <= Z^eta.
SmoothSet smooth_set_capped(double X, double Z, double eta);

// B(X, Z) = A*(2X, Z) \ A*(X, Z): X < m <= 2X with prime factors <= Z^eta.
SmoothSet smooth_interval_set(double X, double Z, double eta);

struct RestrictedPrimeRange {
  double low = 0.0;   // 2^-J Y
  double high = 1.0;  // Y
  std::vector<std::uint64_t> primes;  // p = 2 (mod 3) in (low, high]
};

RestrictedPrimeRange restricted_primes(double Y, std::uint64_t J);

// Whether 2^-J Y > R^eta, the separation between the K-primes and the
// smoothness cap of A(R).
bool prime_range_exceeds_smooth_cap(double Y, std::uint64_t J, double R, double eta);

inline constexpr std::uint64_t kSmoothSieveLimit = 200'000'000;

}  // namespace minicubes
