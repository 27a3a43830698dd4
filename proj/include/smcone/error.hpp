#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smcone {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteData,
  EmptyProblem,
  ParseError,
  NotTriangularLength,
  FactorizationFailure,
  InvalidParameter,
  AllFailed,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteData: return "NonFiniteData";
    case ErrorCode::EmptyProblem: return "EmptyProblem";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotTriangularLength: return "NotTriangularLength";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::AllFailed: return "AllFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smcone
