#pragma once

#include "minicubes/simd.hpp"

namespace minicubes::simd::detail {

const KernelSet& scalar_kernels();
#if defined(MINICUBES_HAVE_AVX2)
const KernelSet& avx2_kernels();
#endif

}  // namespace minicubes::simd::detail
