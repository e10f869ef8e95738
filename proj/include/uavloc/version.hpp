#pragma once

namespace uavloc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace uavloc
