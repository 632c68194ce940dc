#pragma once

#include <stdexcept>
#include <string>

namespace cgd {

/// Bad arguments: dimension mismatch, out-of-range index, invalid constants.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The objective lacks something the operation needs (e.g. an analytic Hessian).
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A computation produced NaN or Inf.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgd
