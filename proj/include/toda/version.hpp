#pragma once

namespace toda {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace toda
