#pragma once

namespace spinframe {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinframe
