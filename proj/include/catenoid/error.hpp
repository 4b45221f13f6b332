#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catenoid {

enum class ErrorCode {
  domain,
  shift_singular,
  interior_singular,
  chart_mismatch,
  nonpositive_h,
  zero_function,
  not_solvable,
  gram_singular,
  singular,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "DOMAIN";
    case ErrorCode::shift_singular: return "SHIFT_SINGULAR";
    case ErrorCode::interior_singular: return "INTERIOR_SINGULAR";
    case ErrorCode::chart_mismatch: return "CHART_MISMATCH";
    case ErrorCode::nonpositive_h: return "NONPOSITIVE_H";
    case ErrorCode::zero_function: return "ZERO_FUNCTION";
    case ErrorCode::not_solvable: return "NOT_SOLVABLE";
    case ErrorCode::gram_singular: return "GRAM_SINGULAR";
    case ErrorCode::singular: return "SINGULAR";
  }
  return "UNKNOWN";
}

/// Numerical failure carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace catenoid
