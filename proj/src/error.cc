#include "hofa/error.h"

namespace hofa {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kDimension: return "DimensionError";
    case ErrorCode::kNotInjective: return "NotInjective";
    case ErrorCode::kRange: return "RangeError";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSignatureMismatch: return "SignatureMismatch";
    case ErrorCode::kNotMeasurable: return "NotMeasurable";
    case ErrorCode::kNotARefinement: return "NotARefinement";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace hofa
