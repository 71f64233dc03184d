#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxcon
{

// Base class for all library errors.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Invalid input: bad dimensions, non-positive weights, malformed configuration.
class ValidationError : public Error
{
public:
  using Error::Error;
};

// Dense oracle refused a problem larger than its configured cap.
class DenseCapError : public Error
{
public:
  DenseCapError(std::size_t dim, std::size_t cap)
    : Error("dense path requested for dimension " + std::to_string(dim) + " above cap " +
            std::to_string(cap)),
      dim(dim), cap(cap)
  {
  }
  std::size_t dim;
  std::size_t cap;
};

// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error
{
public:
  ConvergenceError(const std::string &what, double residual, std::size_t iterations)
    : Error(what + " (residual " + std::to_string(residual) + " after " +
            std::to_string(iterations) + " iterations)"),
      residual(residual), iterations(iterations)
  {
  }
  double residual;
  std::size_t iterations;
};

// The deflated subspace carries no positive spectrum (everything is kernel).
class NoPositiveSpectrum : public Error
{
public:
  NoPositiveSpectrum() : Error("no positive spectrum") {}
};

}  // namespace maxcon
