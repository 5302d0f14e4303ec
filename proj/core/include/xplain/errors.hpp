#pragma once

#include <stdexcept>
#include <string>

namespace xplain {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: dimension mismatch, NaN/Inf input, out-of-range index,
/// invalid parameter value.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The model does not declare the capability an operation requires
/// (gradient, representation, logits, parameters, class decision).
class UnsupportedCapability : public Error {
 public:
  using Error::Error;
};

/// The computation is undefined on this data: singular design matrix,
/// zero-length direction vector, empty region, chance-level reference model.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Exact algorithm refused because the instance exceeds its enumeration bound.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf produced mid-computation (e.g. by a user-supplied objective).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace xplain
