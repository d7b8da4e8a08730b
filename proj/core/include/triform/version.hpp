#pragma once

namespace triform {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace triform
