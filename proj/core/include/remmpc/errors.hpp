#pragma once

#include <stdexcept>
#include <string>

namespace remmpc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class SingularWeightError : public Error {
 public:
  using Error::Error;
};

class SingularKktError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyBoxError : public Error {
 public:
  using Error::Error;
};

class NotPdError : public Error {
 public:
  using Error::Error;
};

class AssumptionViolatedError : public Error {
 public:
  using Error::Error;
};

class CertificationFailedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class SolverFailureError : public Error {
 public:
  explicit SolverFailureError(const std::string& what, int step = -1)
      : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace remmpc
