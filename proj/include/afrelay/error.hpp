// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace afrelay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

/// The right-hand matrix of a generalized eigenproblem is not positive definite.
class SingularPencil : public Error {
public:
  using Error::Error;
};

class Infeasible : public Error {
public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap. Carries the last residual.
class ConvergenceFailure : public Error {
public:
  ConvergenceFailure(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

/// Inputs to the upper-bound computation are mutually inconsistent.
class DegenerateRange : public Error {
public:
  using Error::Error;
};

}  // namespace afrelay
