#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference version;
// wider variants must agree with it to rounding and are selected at runtime.
namespace minicubes::simd {

enum class Isa { scalar, avx2 };

struct KernelSet {
  Isa isa;
  // Sum of e(theta_i) = exp(2 pi i theta_i). Phases may be any real; they are
  // reduced mod 1 inside the kernel.
  std::complex<double> (*unit_phase_sum)(std::span<const double> phases);
  // Sum of weight_i * e(theta_i).
  std::complex<double> (*weighted_phase_sum)(std::span<const double> phases,
                                             std::span<const double> weights);
  // Sum of coef_i * root[index_i], where root is a table of complex values
  // split into real and imaginary arrays.
  std::complex<double> (*gather_rotate_sum)(std::span<const double> coef_re,
                                            std::span<const double> coef_im,
                                            std::span<const std::uint32_t> index,
                                            const double* root_re, const double* root_im);
  // residue_i = (residue_i + step_i) mod modulus, all inputs already reduced.
  void (*advance_residues)(std::span<std::uint32_t> residues,
                           std::span<const std::uint32_t> steps, std::uint32_t modulus);
};

bool isa_supported(Isa isa);
const KernelSet& kernels(Isa isa);

// Widest supported set. The environment variable MINICUBES_ISA=scalar forces
// the reference kernels.
const KernelSet& active();

std::string_view isa_name(Isa isa);

}  // namespace minicubes::simd
