#include <cstdlib>
#include <string>

#include "minicubes/errors.hpp"
#include "simd_impl.hpp"

namespace minicubes::simd {

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MINICUBES_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelSet& kernels(Isa isa) {
  if (!isa_supported(isa))
    throw PreconditionError("instruction set not available: " + std::string(isa_name(isa)));
#if defined(MINICUBES_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_kernels();
#endif
  return detail::scalar_kernels();
}

const KernelSet& active() {
  static const KernelSet& chosen = [&]() -> const KernelSet& {
    const char* env = std::getenv("MINICUBES_ISA");
    if (env != nullptr && std::string(env) == "scalar") return kernels(Isa::scalar);
    if (isa_supported(Isa::avx2)) return kernels(Isa::avx2);
    return kernels(Isa::scalar);
  }();
  return chosen;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace minicubes::simd
