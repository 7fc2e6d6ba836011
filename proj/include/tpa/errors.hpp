#pragma once

#include <stdexcept>
#include <string>

namespace tpa {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operand shapes do not line up (or a constructor got bad dims/data).
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// A tensor entry was NaN/Inf where finite values are required.
class NonFiniteValue : public Error {
 public:
  explicit NonFiniteValue(const std::string& what) : Error(what) {}
};

// inv() refused: some Fourier face is singular or too close to it.
class SingularTensor : public Error {
 public:
  SingularTensor(int face, double sigma_min, double threshold, const std::string& what)
      : Error(what), face_(face), sigma_min_(sigma_min), threshold_(threshold) {}
  int face() const { return face_; }              // 0-based Fourier face index
  double sigma_min() const { return sigma_min_; }
  double threshold() const { return threshold_; }

 private:
  int face_;
  double sigma_min_;
  double threshold_;
};

// from_faces() got face data that is not (conjugate-symmetric) real-origin.
class ImaginaryResidualExceeded : public Error {
 public:
  ImaginaryResidualExceeded(double residual, double threshold, const std::string& what)
      : Error(what), residual_(residual), threshold_(threshold) {}
  double residual() const { return residual_; }
  double threshold() const { return threshold_; }

 private:
  double residual_;
  double threshold_;
};

// smw_pinv() refused: the factor bundle fails its algebraic conditions.
class ConditionsNotSatisfied : public Error {
 public:
  explicit ConditionsNotSatisfied(const std::string& what) : Error(what) {}
};

// Requested construction cannot exist at these dimensions.
class InfeasibleDims : public Error {
 public:
  explicit InfeasibleDims(const std::string& what) : Error(what) {}
};

// Malformed input file (either format).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Filesystem-level failure (cannot open/read/write).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace tpa
