#pragma once

#include <stdexcept>
#include <string>

namespace vpsumm {

// Stable error taxonomy; the CLI maps codes to machine-readable strings.
enum class ErrorCode {
  IoError,
  FormatError,
  DimensionMismatch,
  InvalidArgument,
  OutOfRange,
  DuplicateKey,
  NonFiniteValue,
  CapExceeded,
  MissingPrediction,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vpsumm
