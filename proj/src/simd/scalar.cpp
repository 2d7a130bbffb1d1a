#include <cmath>
#include <numbers>

#include "minicubes/accumulate.hpp"
#include "simd_impl.hpp"

namespace minicubes::simd::detail {

namespace {

inline std::complex<double> unit_root(double theta) {
  const double r = theta - std::nearbyint(theta);
  const double x = 2.0 * std::numbers::pi * r;
  return {std::cos(x), std::sin(x)};
}

std::complex<double> unit_phase_sum_scalar(std::span<const double> phases) {
  CompensatedComplexSum acc;
  for (double t : phases) acc.add(unit_root(t));
  return acc.value();
}

std::complex<double> weighted_phase_sum_scalar(std::span<const double> phases,
                                               std::span<const double> weights) {
  CompensatedComplexSum acc;
  for (std::size_t i = 0; i < phases.size(); ++i) acc.add(weights[i] * unit_root(phases[i]));
  return acc.value();
}

std::complex<double> gather_rotate_sum_scalar(std::span<const double> coef_re,
                                              std::span<const double> coef_im,
                                              std::span<const std::uint32_t> index,
                                              const double* root_re, const double* root_im) {
  CompensatedSum re, im;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const double rr = root_re[index[i]];
    const double ri = root_im[index[i]];
    re.add(coef_re[i] * rr - coef_im[i] * ri);
    im.add(coef_re[i] * ri + coef_im[i] * rr);
  }
  return {re.value(), im.value()};
}

void advance_residues_scalar(std::span<std::uint32_t> residues,
                             std::span<const std::uint32_t> steps, std::uint32_t modulus) {
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const std::uint32_t room = modulus - steps[i];
    residues[i] = residues[i] >= room ? residues[i] - room : residues[i] + steps[i];
  }
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{Isa::scalar, unit_phase_sum_scalar, weighted_phase_sum_scalar,
                             gather_rotate_sum_scalar, advance_residues_scalar};
  return set;
}

}  // namespace minicubes::simd::detail
