#include "vpsumm/error.hpp"

namespace vpsumm {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::FormatError: return "format_error";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::DuplicateKey: return "duplicate_key";
    case ErrorCode::NonFiniteValue: return "non_finite_value";
    case ErrorCode::CapExceeded: return "cap_exceeded";
    case ErrorCode::MissingPrediction: return "missing_prediction";
  }
  return "unknown";
}

}  // namespace vpsumm
