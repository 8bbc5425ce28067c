#pragma once

#include <stdexcept>
#include <string>

namespace gvtraj {

// Base type for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Rotation matrix log requested too close to the branch cut at angle pi.
// The caller has to reparameterize (e.g. recenter the working point) --
// there is no numerically stable axis to return.
class AngleNearPi : public Error {
 public:
  using Error::Error;
};

// Inverse left Jacobian requested at (or numerically at) a singular angle,
// i.e. within tolerance of a nonzero multiple of 2*pi.
class SingularJacobian : public Error {
 public:
  using Error::Error;
};

// Motion-prior interval with dt <= 0.
class NonPositiveDt : public Error {
 public:
  using Error::Error;
};

// Cholesky pivot failed; the assembled system is not positive definite.
// During optimisation this signals that step damping is needed.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// Block factorization could not be completed (structural problem, e.g.
// empty system or inconsistent block pattern).
class FactorizationFailure : public Error {
 public:
  using Error::Error;
};

// A covariance / scale-matrix update produced a degenerate (rank deficient
// beyond repair) result, e.g. all-zero residual statistics.
class DegenerateUpdate : public Error {
 public:
  using Error::Error;
};

// Malformed input file (CSV / g2o / config / params artifact).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Quaternion read from file is too far from unit norm.
class NonNormalizedQuaternion : public ParseError {
 public:
  using ParseError::ParseError;
};

// Metrics requested against groundtruth that does not cover the estimate.
class MissingGroundtruth : public Error {
 public:
  using Error::Error;
};

}  // namespace gvtraj
