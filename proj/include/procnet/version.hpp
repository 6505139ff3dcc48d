#pragma once

namespace procnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace procnet
