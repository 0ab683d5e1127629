#pragma once

#include <stdexcept>
#include <string>

namespace bfcs {

/// Operand shapes do not agree (matrix columns vs. signal length, etc.).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A result that cannot be normalized because it collapsed to the zero vector.
class DegenerateResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bfcs
