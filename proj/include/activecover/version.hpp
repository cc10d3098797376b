#pragma once

namespace activecover {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace activecover
