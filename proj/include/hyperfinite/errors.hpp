#pragma once

#include <stdexcept>
#include <string>

namespace hyperfinite {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or preset parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// API misuse: mismatched spaces, unnormalized states where a unit vector is required.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure or a tolerance check that did not hold.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperfinite
