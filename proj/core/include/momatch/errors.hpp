#pragma once

#include <stdexcept>
#include <string>

namespace momatch {

// Raised when two objects that must share a dimension do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A moment system with no solution over the requested support.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The LP substrate could not certify its answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_same_dimension(std::size_t expected, std::size_t actual,
                            const char* what);

}  // namespace momatch
