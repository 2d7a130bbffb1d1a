#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "minicubes/params.hpp"
#include "minicubes/smooth_sets.hpp"

namespace minicubes {

// Index set of a cubic Weyl sum: an integer interval (lo, hi], an explicit
// increasing list, or the bilinear products p*w used by K.
class WeylSumSpec {
 public:
  enum class Kind { interval, set, bilinear };

  static WeylSumSpec interval(double lo, double hi);
  static WeylSumSpec set(std::vector<std::uint64_t> members);
  static WeylSumSpec bilinear(std::vector<std::uint64_t> primes,
                              std::vector<std::vector<std::uint64_t>> cofactors);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<std::uint64_t>& members() const { return members_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  const std::vector<std::vector<std::uint64_t>>& cofactors() const { return cofactors_; }

  // Number of summands.
  std::uint64_t term_count() const;
  // The summation bases x (with repetition for bilinear products).
  std::vector<std::uint64_t> bases() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::interval;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<std::uint64_t> members_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::vector<std::uint64_t>> cofactors_;
};

inline constexpr std::uint64_t kMaxWeylTerms = 100'000'000;

// Named generating functions built from a parameter tuple.
WeylSumSpec spec_f(const Parameters& p);   // P < x <= 2P
WeylSumSpec spec_h(const Parameters& p);   // x in A(R)
WeylSumSpec spec_K(const Parameters& p);   // p w, p restricted prime, w in B(P/p, 2P/Y)
WeylSumSpec spec_F(const Parameters& p);   // 1 <= x <= 2P
WeylSumSpec spec_F0(const Parameters& p);  // 1 <= x <= P
WeylSumSpec spec_G(const Parameters& p);   // 1 <= y <= R

WeylSumSpec spec_by_name(const std::string& name, const Parameters& p);

// Cubes of a spec's bases, materialised once for repeated evaluation.
class CubeList {
 public:
  explicit CubeList(const WeylSumSpec& spec);
  explicit CubeList(std::vector<std::uint64_t> bases);

  std::size_t size() const { return cubes_.size(); }
  const std::vector<std::uint64_t>& cubes() const { return cubes_; }
  std::uint64_t max_cube() const { return max_cube_; }

  // sum e(alpha c) with the phase alpha*c reduced mod 1 exactly.
  std::complex<double> evaluate(double alpha) const;
  // sum e((a/q + beta) c), with (a c mod q) computed in integers.
  std::complex<double> evaluate_rational(std::int64_t a, std::uint64_t q, double beta) const;

 private:
  std::vector<std::uint64_t> cubes_;
  std::uint64_t max_cube_ = 0;
};

std::complex<double> weyl_sum(double alpha, const WeylSumSpec& spec);

// alpha * c mod 1 (in (-1, 1), sign of alpha) without losing bits to the
// integer part of the product.
class ExactPhase {
 public:
  explicit ExactPhase(double alpha);
  double operator()(std::uint64_t c) const;

 private:
  double alpha_;
  std::uint64_t mantissa_ = 0;
  int shift_ = 0;
  bool negative_ = false;
  enum class Mode { zero, integer, exact, small } mode_ = Mode::zero;
};

}  // namespace minicubes
