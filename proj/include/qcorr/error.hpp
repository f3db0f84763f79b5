#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcorr {

enum class ErrorKind {
  NotHermitian,
  TraceNotOne,
  NotPositive,
  NotAState,
  NumericalFailure,
  Overflow,
  DomainError,
  ConfigError,
  UnknownPreset,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotAState: return "NotAState";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated, `what()` carries the measured deviation.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Configuration problems are user errors; everything else is numerical.
  bool is_config_error() const noexcept {
    return kind_ == ErrorKind::ConfigError || kind_ == ErrorKind::UnknownPreset ||
           kind_ == ErrorKind::IoError;
  }

 private:
  ErrorKind kind_;
};

}  // namespace qcorr
