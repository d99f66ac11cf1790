#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cooplift {

enum class ErrorCode {
  NotSkew,
  ConstraintViolation,
  BadExponent,
  Degenerate,
  ArityMismatch,
  SingularMass,
  RankDeficient,
  DegenerateTension,
  OutOfBall,
  DegenerateThrust,
  HeadingCollinear,
  InsufficientHistory,
  ParseError,
  ValidationError,
  IoError,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code carries the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cooplift
