#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bisectorlab {

enum class ErrorCode {
  DegeneratePair,
  Collinear,
  IndexOutOfRange,
  InvalidRange,
  EmptyMap,
  EmptySet,
  MismatchedSource,
  CapExceeded,
  PointOnCurve,
  SampleOffCurve,
  SeparationViolation,
  QuantizationRange,
  BackendMismatch,
  DuplicatePoint,
  OracleMismatch,
  InsufficientData,
  NonPositiveValue,
  ParseError,
  InvalidConfig,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::Collinear: return "Collinear";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::EmptyMap: return "EmptyMap";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::MismatchedSource: return "MismatchedSource";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::PointOnCurve: return "PointOnCurve";
    case ErrorCode::SampleOffCurve: return "SampleOffCurve";
    case ErrorCode::SeparationViolation: return "SeparationViolation";
    case ErrorCode::QuantizationRange: return "QuantizationRange";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace bisectorlab
