#pragma once

namespace efl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace efl
