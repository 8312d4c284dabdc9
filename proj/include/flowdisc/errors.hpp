#pragma once

#include <stdexcept>
#include <string>

namespace flowdisc {

/// Malformed input: bad files, broken preconditions, out-of-range parameters.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound that the construction guarantees was observed to fail.
/// Always a bug; the CLI maps this to exit code 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace flowdisc
