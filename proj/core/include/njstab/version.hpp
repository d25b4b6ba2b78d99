#pragma once

namespace njstab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace njstab
