#pragma once

#include <stdexcept>
#include <string>

namespace linforget {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dimension argument is zero, negative, or inconsistent.
class InvalidDimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be (numerically) full rank is not. Carries the
/// condition estimate observed when the factorization failed.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// The requested problem lies outside the n <= p regime this library supports.
class UnsupportedRegimeError : public Error {
 public:
  using Error::Error;
};

/// A feature map violates the equal-singular-value structure the closed
/// forms rely on.
class ModelAssumptionError : public Error {
 public:
  using Error::Error;
};

/// File read/write failure; the message includes the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace linforget
