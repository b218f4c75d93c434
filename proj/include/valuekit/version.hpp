#pragma once

namespace valuekit {

inline constexpr const char* kToolName = "valuekit";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace valuekit
