#pragma once

namespace tourcount {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tourcount
