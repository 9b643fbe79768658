#pragma once

#include <stdexcept>
#include <string>

namespace mlipuq {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Invalid user-supplied configuration (flags, option values, presets).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &msg) : Error(msg) {}
};

/// Malformed input data (files that cannot be parsed).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string &msg) : Error(msg) {}
};

/// Numerical failure (non-positive-definite systems, non-finite values).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string &msg) : Error(msg) {}
};

/// A caller violated a documented precondition of an API.
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string &msg) : Error(msg) {}
};

}  // namespace mlipuq
