#include "minicubes/smooth_sets.hpp"

#include <cmath>
#include <string>

#include "minicubes/errors.hpp"
#include "minicubes/params.hpp"

namespace minicubes {

namespace {

// Largest prime factor of every m <= limit.
std::vector<std::uint32_t> largest_prime_factor(std::uint64_t limit) {
  if (limit > kSmoothSieveLimit)
    throw ResourceLimitError("smooth-number sieve above " + std::to_string(kSmoothSieveLimit));
  std::vector<std::uint32_t> lpf(limit + 1, 0);
  if (limit >= 1) lpf[1] = 1;
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (lpf[p] != 0) continue;
    for (std::uint64_t m = p; m <= limit; m += p) lpf[m] = static_cast<std::uint32_t>(p);
  }
  return lpf;
}

// m in (low, high] with largest prime factor <= cap.
SmoothSet collect(double low, double high, double cap) {
  SmoothSet s;
  s.bound_low = low;
  s.bound_high = high;
  s.prime_cap = cap;
  const std::int64_t hi = tolerant_floor(high);
  const std::int64_t lo = low < 0 ? 0 : tolerant_floor(low);
  if (hi < 1 || hi <= lo) return s;
  const auto lpf = largest_prime_factor(static_cast<std::uint64_t>(hi));
  const std::int64_t cap_int = tolerant_floor(cap);
  for (std::int64_t m = std::max<std::int64_t>(lo + 1, 1); m <= hi; ++m)
    if (static_cast<std::int64_t>(lpf[m]) <= cap_int) s.members.push_back(static_cast<std::uint64_t>(m));
  return s;
}

}  // namespace

SmoothSet smooth_set(double R, double eta) {
  require(R >= 1.0, "smooth set needs R >= 1");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
  return collect(0.0, R, std::pow(R, eta));
}

SmoothSet smooth_set_capped(double X, double Z, double eta) {
  require(X >= 1.0 && Z >= 1.0, "smooth set needs X, Z >= 1");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
  return collect(0.0, X, std::pow(Z, eta));
}

SmoothSet smooth_interval_set(double X, double Z, double eta) {
  require(X > 0.0 && Z >= 1.0, "smooth interval set needs X > 0, Z >= 1");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
  return collect(X, 2.0 * X, std::pow(Z, eta));
}

RestrictedPrimeRange restricted_primes(double Y, std::uint64_t J) {
  require(Y >= 1.0, "restricted primes need Y >= 1");
  RestrictedPrimeRange r;
  r.high = Y;
  r.low = std::ldexp(Y, -static_cast<int>(std::min<std::uint64_t>(J, 2000)));
  const std::int64_t hi = tolerant_floor(Y);
  const std::int64_t lo = tolerant_floor(r.low);
  if (hi < 2) return r;
  const auto lpf = largest_prime_factor(static_cast<std::uint64_t>(hi));
  for (std::int64_t p = std::max<std::int64_t>(lo + 1, 2); p <= hi; ++p)
    if (lpf[p] == static_cast<std::uint32_t>(p) && p % 3 == 2) r.primes.push_back(static_cast<std::uint64_t>(p));
  return r;
}

bool prime_range_exceeds_smooth_cap(double Y, std::uint64_t J, double R, double eta) {
  return std::ldexp(Y, -static_cast<int>(std::min<std::uint64_t>(J, 2000))) > std::pow(R, eta);
}

}  // namespace minicubes
