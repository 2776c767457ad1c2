#pragma once

#include <stdexcept>
#include <string>

namespace skm {

/// Malformed input, IO failure or a violated data invariant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model file written by an incompatible format version.
class VersionError : public DataError {
 public:
  using DataError::DataError;
};

/// A numeric procedure could not produce a trustworthy result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Gram or system matrix is singular to working tolerance.
class SingularError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Iterative solver ran out of iterations.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace skm
