#pragma once

namespace ot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ot
