#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace vcrisk {

/** Dense column vector */
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/** Dense matrix, one observation per row */
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using scalar_t = double;
using Vector = VectorX<scalar_t>;
using Matrix = MatrixX<scalar_t>;
using Index = Eigen::Index;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain (dimension mismatch, level outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested operation is not available for this model (e.g. survival copula above the dimension cap).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Conditioning event has probability zero.
class DegenerateEventError : public Error {
 public:
  using Error::Error;
};

/// Quantile at level 1 of a distribution with unbounded support.
class InfiniteQuantileError : public Error {
 public:
  using Error::Error;
};

/// Integral defining the requested quantity does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Too few Monte Carlo samples fell into the conditioning event.
class InsufficientSampleError : public Error {
 public:
  using Error::Error;
};

}  // namespace vcrisk
