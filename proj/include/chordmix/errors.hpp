#pragma once

#include <stdexcept>
#include <string>

namespace chordmix {

/// Bad input: out-of-range parameters, dimension mismatches, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not finish (iteration caps, exhausted searches).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chordmix
