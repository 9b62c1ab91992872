#pragma once

#include <stdexcept>
#include <string>

namespace cosntf {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not conform (t-product inner mode, fold row count, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An index outside the extent of the mode it addresses.
class IndexError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Iterative kernel stopped at its cap. `residual()` is the best value reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A frontal slice in the Fourier domain is not invertible.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, std::size_t slice)
      : Error(what), slice_(slice) {}
  /// 0-based Fourier slice index.
  std::size_t slice() const noexcept { return slice_; }

 private:
  std::size_t slice_;
};

/// Index sampling could not produce enough distinct indices.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cosntf
