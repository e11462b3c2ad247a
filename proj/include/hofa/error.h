#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hofa {

enum class ErrorCode {
  kCapacityExceeded,
  kDimension,
  kNotInjective,
  kRange,
  kInvalidOrder,
  kInvalidArgument,
  kSignatureMismatch,
  kNotMeasurable,
  kNotARefinement,
  kParse,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// front ends (CLI, Python) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace hofa
