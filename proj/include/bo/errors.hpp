#pragma once

#include <stdexcept>
#include <string>

namespace bo {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array length does not match the grid.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range numerical parameter (negative smoothness, unsupported p, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An operation's input violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operation is not defined for the requested variant.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file or CLI override.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bo
