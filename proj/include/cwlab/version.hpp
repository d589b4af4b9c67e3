#pragma once

namespace cwlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cwlab
