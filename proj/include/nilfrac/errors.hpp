#pragma once

#include <stdexcept>
#include <string>

namespace nilfrac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid / operator / experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (alpha <= 0, s <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two grid objects that were expected to share a GridSpec do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the dense reference path.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A multiplier produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to reach its tolerance. Carries the last error estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace nilfrac
