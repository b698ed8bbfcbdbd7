#pragma once

namespace vaxkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vaxkit
