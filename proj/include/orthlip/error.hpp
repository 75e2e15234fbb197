#pragma once

#include <stdexcept>
#include <string>

namespace orthlip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition (bad exponents, bad radii,
/// malformed configuration). The CLI maps this to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quantity would leave the representable floating-point range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure stopped before meeting its termination criterion.
/// The CLI maps this to exit code 3.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double final_residual, long iterations)
      : Error(what), final_residual_(final_residual), iterations_(iterations) {}

  double final_residual() const noexcept { return final_residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double final_residual_;
  long iterations_;
};

}  // namespace orthlip
