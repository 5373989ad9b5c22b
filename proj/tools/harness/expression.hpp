#pragma once

#include <cstddef>
#include <string>

#include "momatch/polynomial.hpp"

namespace momatch::harness {

// Parses sums of terms such as "0.5*x1*x2 - x3^2 + 2" over n variables
// x1..xn. Throws std::invalid_argument on malformed input or out-of-range
// variables.
Polynomial parse_polynomial_expression(const std::string& text, std::size_t n);

}  // namespace momatch::harness
