#ifndef SOLITONLAB_ERRORS_HPP
#define SOLITONLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace soliton {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Metric is not positive definite (smallest eigenvalue below threshold).
class DegenerateMetricError : public Error {
 public:
  explicit DegenerateMetricError(const std::string& what) : Error(what) {}
};

// A jet of higher order than supplied is required.
class InsufficientJetOrderError : public Error {
 public:
  explicit InsufficientJetOrderError(const std::string& what) : Error(what) {}
};

// |grad f| fell below the gradient cutoff; level-set quantities undefined.
class GradientCriticalError : public Error {
 public:
  explicit GradientCriticalError(const std::string& what) : Error(what) {}
};

// Mean curvature below cutoff; umbilical ratio undefined.
class MeanCurvatureDegenerateError : public Error {
 public:
  explicit MeanCurvatureDegenerateError(const std::string& what) : Error(what) {}
};

// Principal directions undefined at an umbilical point.
class UmbilicalDegenerateError : public Error {
 public:
  explicit UmbilicalDegenerateError(const std::string& what) : Error(what) {}
};

// lambda*|grad f|^2 - 1 too close to zero for the reversed-time weight.
class ThetaSingularError : public Error {
 public:
  explicit ThetaSingularError(const std::string& what) : Error(what) {}
};

// Re-projection onto a level set or a flow/geodesic integration failed.
class ReprojectionError : public Error {
 public:
  explicit ReprojectionError(const std::string& what) : Error(what) {}
};

// ODE integration failed; carries the last radius that was still valid.
class IntegrationFailureError : public Error {
 public:
  IntegrationFailureError(const std::string& what, double last_valid)
      : Error(what), last_valid_r(last_valid) {}
  double last_valid_r;
};

// Point outside a model's chart domain (grid range, axis, poles).
class ChartDomainError : public Error {
 public:
  explicit ChartDomainError(const std::string& what) : Error(what) {}
};

// Operation not available for this model.
class UnsupportedModelError : public Error {
 public:
  explicit UnsupportedModelError(const std::string& what) : Error(what) {}
};

}  // namespace soliton

#endif
