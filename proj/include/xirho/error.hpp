#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xirho {

enum class ErrorCode {
  UnknownFamily,
  MissingParam,
  ParamOutOfRange,
  ParseError,
  NumericOverflow,
  QuadratureNotConverged,
  InversionFailed,
  TooFewPoints,
  ZeroVariance,
  GridInconsistent,
  DimensionMismatch,
  DomainError,
  NotInRegion,
  BisectionFailed,
  BracketFailed,
  NoBracket,
  InfeasibleBudget,
  ProjectionNotConverged,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xirho
