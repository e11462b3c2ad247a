#pragma once

namespace hofa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hofa
