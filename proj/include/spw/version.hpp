#pragma once

namespace spw {

inline constexpr const char* kVersion = "spw 0.1.0";

}  // namespace spw
