#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace covgeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfSupport : public Error {
 public:
  using Error::Error;
};

class NonFiniteIntegrand : public Error {
 public:
  using Error::Error;
};

class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

class EmptySamples : public Error {
 public:
  using Error::Error;
};

class BaseMismatch : public Error {
 public:
  using Error::Error;
};

class SupportMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class ZeroTangent : public Error {
 public:
  using Error::Error;
};

/// Raised when a symmetric eigendecomposition yields eigenvalues that are
/// too negative to be rounding noise.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The metric is not invertible. `null_space()` holds the eigenvectors of the
/// near-zero eigenvalues, one per column; each witnesses a linear dependence
/// between score coordinates.
class SingularMetric : public Error {
 public:
  SingularMetric(const std::string& what, Eigen::MatrixXd null_space)
      : Error(what), null_space_(std::move(null_space)) {}

  const Eigen::MatrixXd& null_space() const noexcept { return null_space_; }

 private:
  Eigen::MatrixXd null_space_;
};

}  // namespace covgeo
