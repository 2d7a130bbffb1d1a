#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace minicubes::detail {

// e(j/m) for j = 0..m-1, split into real and imaginary parts.
struct RootTable {
  std::vector<double> re;
  std::vector<double> im;

  explicit RootTable(std::uint64_t m) : re(m), im(m) {
    // Reduce to a quarter turn in integers so that multiples of 1/4 are exact.
    for (std::uint64_t j = 0; j < m; ++j) {
      const unsigned __int128 t = static_cast<unsigned __int128>(4) * j;
      const auto quadrant = static_cast<unsigned>(t / m);
      const auto rem = static_cast<std::uint64_t>(t % m);
      const double x = 0.5 * std::numbers::pi * static_cast<double>(rem) / static_cast<double>(m);
      const double c = rem == 0 ? 1.0 : std::cos(x);
      const double s = rem == 0 ? 0.0 : std::sin(x);
      switch (quadrant) {
        case 0: re[j] = c; im[j] = s; break;
        case 1: re[j] = -s; im[j] = c; break;
        case 2: re[j] = -c; im[j] = -s; break;
        default: re[j] = s; im[j] = -c; break;
      }
    }
  }
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t reduce_signed(std::int64_t a, std::uint64_t m) {
  const std::int64_t r = a % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

}  // namespace minicubes::detail
