#pragma once

#include <stdexcept>
#include <string>

namespace testprio {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data: bad verdict codes, broken CSV rows, duplicate records.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or unusable inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A dataset or report with nothing in it.
class EmptyInputError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Internal consistency violations: schedule/oracle mismatch, exhausted board,
// executing an excluded test.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace testprio
