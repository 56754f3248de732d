#pragma once

namespace dyadscope {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dyadscope
