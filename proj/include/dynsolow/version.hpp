#pragma once

namespace dynsolow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dynsolow
