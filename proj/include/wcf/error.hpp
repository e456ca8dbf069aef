#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wcf {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  NotDensity,
  DimensionMismatch,
  BadNorm,
  NotPOVM,
  DegenerateOutcome,
  ParseError,
  NotAligned,
  OutOfRange,
  DimensionTooLarge,
  BadDimension,
  UnsupportedStrategy,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotDensity: return "NotDensity";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadNorm: return "BadNorm";
    case ErrorKind::NotPOVM: return "NotPOVM";
    case ErrorKind::DegenerateOutcome: return "DegenerateOutcome";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotAligned: return "NotAligned";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::UnsupportedStrategy: return "UnsupportedStrategy";
  }
  return "Unknown";
}

}  // namespace wcf
