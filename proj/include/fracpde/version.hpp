#pragma once

namespace fracpde {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracpde
