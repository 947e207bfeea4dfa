#pragma once

#include <stdexcept>
#include <string>

namespace axplore {

// Base of every error raised by the library. Violations found by the
// containment oracle are data, not errors, and never throw.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Value outside the Q16.16 representable range.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// Accumulator overflow in fixed-point or interval arithmetic.
class Overflow : public Error {
 public:
  using Error::Error;
};

// Mismatched dimensions between a model, a spike train or a k matrix.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace axplore
