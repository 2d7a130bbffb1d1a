#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minicubes/params.hpp"

namespace minicubes {

// Multiset of x1^3 + x2^3 over ordered pairs with x_lo <= x1, x2 <= x_hi and
// sum <= limit, stored as sorted (sum, multiplicity) runs.
class TwoCubeTable {
 public:
  TwoCubeTable(std::uint64_t limit, std::uint64_t x_lo, std::uint64_t x_hi);

  std::uint64_t limit() const { return limit_; }
  std::uint64_t multiplicity(std::uint64_t s) const;
  const std::vector<std::uint64_t>& sums() const { return sums_; }
  const std::vector<std::uint32_t>& multiplicities() const { return mult_; }
  std::uint64_t total_pairs() const { return total_; }

  // Index range [first, last) of stored sums in (lo, hi].
  std::pair<std::size_t, std::size_t> range(std::uint64_t lo_exclusive, std::uint64_t hi_inclusive) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> sums_;
  std::vector<std::uint32_t> mult_;
  std::uint64_t total_ = 0;
};

inline constexpr std::uint64_t kMaxTableLimit = 20'000'000'000ULL;

enum class CountVariant { r, rho, sigma };
std::string count_variant_name(CountVariant v);

struct RepCountReport {
  std::uint64_t n = 0;
  double theta = 0.0;
  std::uint64_t count = 0;
  CountVariant variant = CountVariant::r;
  std::optional<double> series;
  std::optional<double> predicted;
  std::optional<double> ratio;  // count / predicted, only when predicted > 0
  bool exceptional() const { return count == 0; }
};

// Largest y >= 0 with y <= n^theta, decided exactly at integer boundaries.
std::uint64_t minicube_bound(std::uint64_t n, double theta);

struct CountOptions {
  // Admit x_i = 0 and y_i = 0.
  bool allow_zero = false;
};

RepCountReport count_r(std::uint64_t n, double theta, const CountOptions& opts = {});
RepCountReport count_rho(std::uint64_t n, const Parameters& params);
RepCountReport count_sigma(std::uint64_t n, double theta, double P, double R);

struct ScanSummary {
  std::uint64_t n_lo = 0;  // window is (n_lo, n_hi]
  std::uint64_t n_hi = 0;
  double theta = 0.0;
  std::uint64_t Q_max = 0;
  std::uint64_t size = 0;
  std::uint64_t exceptional = 0;
  double exceptional_fraction = 0.0;
  std::uint64_t ratio_defined = 0;  // n with predicted > 0
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  double mean_count = 0.0;
};

struct ScanResult {
  std::vector<RepCountReport> rows;
  ScanSummary summary;
};

struct ScanOptions {
  // Skip the singular-series prediction (Q_max is then ignored).
  bool with_prediction = true;
};

ScanResult batch_scan(std::uint64_t n_lo, std::uint64_t n_hi, double theta, std::uint64_t Q_max,
                      const ScanOptions& opts = {});

std::uint64_t hua_count(std::uint64_t R, unsigned k);

enum class MeanShape { f2h6, K2h6, K8, f2K2h4 };
MeanShape parse_mean_shape(const std::string& s);
std::string mean_shape_name(MeanShape s);

std::uint64_t mixed_mean_count(double P, double R, double eta, MeanShape shape,
                               const ParameterOverrides& overrides = {});

// Parameter tuple for toy mean-value counts at a given P and R:
// N = round(4 P^3), Y = P^(11/79) and J from the default tau unless overridden.
Parameters toy_parameters(double P, double R, double eta, const ParameterOverrides& overrides = {});

// Index sets behind mixed_mean_count, shared with the grid-side evaluation.
struct MixedSets {
  std::vector<std::uint64_t> f;  // P < x <= 2P
  std::vector<std::uint64_t> h;  // A(R)
  std::vector<std::uint64_t> K;  // p w, with repetition
};
MixedSets mixed_sets(double P, double R, double eta, const ParameterOverrides& overrides = {});

}  // namespace minicubes
