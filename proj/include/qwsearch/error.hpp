#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qwsearch {

enum class ErrorCode {
  InvalidArgs,
  CapacityExceeded,
  LengthMismatch,
  NotInBasis,
  DimensionMismatch,
  WrongMarkCount,
  NotAnEdge,
  WindowTooSmall,
  ConvergenceFailure,
  EngineMismatch,
  Diverges,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above, so
/// callers (the CLI in particular) can tell validation errors from
/// numerical ones without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of the numerical machinery rather than of the input.
  bool is_numerical() const noexcept {
    return code_ == ErrorCode::ConvergenceFailure || code_ == ErrorCode::Diverges ||
           code_ == ErrorCode::WindowTooSmall;
  }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgs: return "InvalidArgs";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotInBasis: return "NotInBasis";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WrongMarkCount: return "WrongMarkCount";
    case ErrorCode::NotAnEdge: return "NotAnEdge";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::EngineMismatch: return "EngineMismatch";
    case ErrorCode::Diverges: return "Diverges";
  }
  return "Unknown";
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace qwsearch
