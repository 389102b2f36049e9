#pragma once

#include <stdexcept>
#include <string>

namespace yrast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument combination (out-of-range K, bad sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No Fock state satisfies the (N, K, k_max) constraints.
class EmptyBasisError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a basis do not.
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual)
      : Error(what), residual_(last_residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The conditional wave function vanishes on the whole grid.
class DegenerateConditional : public Error {
 public:
  using Error::Error;
};

/// The vector sum of particle directions has (numerically) zero length.
class UndefinedDirection : public Error {
 public:
  using Error::Error;
};

/// The many-body amplitude is too close to a node to define a velocity.
class NearNode : public Error {
 public:
  using Error::Error;
};

/// Mean-field parameter matching could not bracket a root.
class NoSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace yrast
