#pragma once

namespace elight {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace elight
