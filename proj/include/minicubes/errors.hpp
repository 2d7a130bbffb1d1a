#pragma once

#include <stdexcept>
#include <string>

namespace minicubes {

// Caller handed in arguments outside an operation's domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A table, grid or loop would exceed the documented size budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative or adaptive numerical method stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace minicubes
