#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "minicubes/params.hpp"

namespace minicubes {

struct ResidualRow {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double beta = 0.0;
  double residual = 0.0;  // |f - f*|
  double envelope = 0.0;  // q^{1/2} (1 + P^3 |beta|)^{1/2}
  double ratio = 0.0;
};

struct ResidualSweep {
  double P = 0.0;
  std::int64_t q_max = 1;
  std::vector<ResidualRow> rows;
  double max_ratio = 0.0;
  ResidualRow worst;
};

inline constexpr std::int64_t kResidualQCap = 50;

// |f(a/q + beta) - q^-1 S(q,a) v(beta; P)| over `samples` equispaced beta on
// each arc |q alpha - a| <= q_max / P^3 with q <= q_max.
ResidualSweep residual_sweep(double P, std::int64_t q_max, int samples = 21);

// Command-line entry point. Returns the process exit status:
// 0 success, 1 usage, 2 precondition, 3 resource guard, 4 non-convergence.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitPrecondition = 2,
  kExitResource = 3,
  kExitConvergence = 4,
};

}  // namespace minicubes
