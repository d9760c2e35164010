// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace evoc {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or missing input (files, annotations, arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A value failed a numerical validity check (non-unit quaternion,
/// negative counts, masses not summing to one, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input for which the requested quantity is undefined, e.g. the spherical
/// angles of the zero vector.
class DegenerateInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace evoc
