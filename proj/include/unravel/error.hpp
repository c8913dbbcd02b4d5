#pragma once

#include <stdexcept>
#include <string>

namespace unravel {

/// Base for all library errors: contract violations on inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical guard tripped (step too large, non-finite entries).
/// The CLI maps this to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// No exact mixed-state evaluator exists for a (system size, measure) pair.
class ReferenceUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace unravel
