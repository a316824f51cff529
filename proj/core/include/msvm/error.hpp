#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msvm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar or option is outside its valid domain (c <= 0, p <= 0, tol <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during an iterative computation.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// A label column contains a single class, so the binary problem it encodes is vacuous.
class DegenerateLabelError : public Error {
 public:
  DegenerateLabelError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Input files or manifests that cannot be parsed or are inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A metric has no defined value for the given input (e.g. no row carries a positive label).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace msvm
