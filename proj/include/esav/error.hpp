#pragma once

#include <stdexcept>
#include <string>

namespace esav {

/// Failure categories. Each maps to a distinct process exit status in the CLI.
enum class ErrorCode {
  InvalidArgument = 10,
  SingularOperator = 11,
  OverflowGuard = 12,
  ExtrapolationDegenerate = 13,
  IterationLimit = 14,
  InvalidShift = 15,
  DegenerateReduction = 16,
  Config = 17,
  Io = 18,
  InvariantViolation = 19,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

/// A shifted operator a + b*symbol vanishes at some wavenumber.
class SingularOperator : public Error {
 public:
  SingularOperator(const std::string& what, double kx, double ky)
      : Error(ErrorCode::SingularOperator, what), kx_(kx), ky_(ky) {}
  double kx() const noexcept { return kx_; }
  double ky() const noexcept { return ky_; }

 private:
  double kx_, ky_;
};

/// An exponent s - E1/C exceeded the representable range; a larger C is needed.
class OverflowGuard : public Error {
 public:
  OverflowGuard(const std::string& what, double argument)
      : Error(ErrorCode::OverflowGuard, what), argument_(argument) {}
  double argument() const noexcept { return argument_; }

 private:
  double argument_;
};

/// The extrapolated auxiliary ratio 3/2 r^n - 1/2 r^{n-1} is not positive.
class ExtrapolationDegenerate : public Error {
 public:
  ExtrapolationDegenerate(const std::string& what, double ratio)
      : Error(ErrorCode::ExtrapolationDegenerate, what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class IterationLimit : public Error {
 public:
  IterationLimit(const std::string& what, int iterations, double last_update)
      : Error(ErrorCode::IterationLimit, what), iterations_(iterations), last_update_(last_update) {}
  int iterations() const noexcept { return iterations_; }
  double last_update() const noexcept { return last_update_; }

 private:
  int iterations_;
  double last_update_;
};

/// E1 + C <= 0 under the square root of the classical auxiliary variable.
class InvalidShift : public Error {
 public:
  explicit InvalidShift(const std::string& what) : Error(ErrorCode::InvalidShift, what) {}
};

class DegenerateReduction : public Error {
 public:
  explicit DegenerateReduction(const std::string& what) : Error(ErrorCode::DegenerateReduction, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(ErrorCode::InvariantViolation, what) {}
};

}  // namespace esav
