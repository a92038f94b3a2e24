#pragma once

namespace chemcompass {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace chemcompass
