#pragma once

#include <stdexcept>
#include <string>

namespace cwlab {

/// Base of every error thrown by the library. `exit_code()` is the process
/// status the CLI maps it to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class ParameterError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Vector/matrix sizes that do not fit together.
class DimensionError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Argument outside the domain of a function (x at a singular endpoint, ...).
class DomainError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Problem too large for the dense oracle.
class CapacityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A vector with several comparable peaks where one was expected.
class AmbiguityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class SolverError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

}  // namespace cwlab
