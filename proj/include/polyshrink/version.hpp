#pragma once

namespace polyshrink {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polyshrink
