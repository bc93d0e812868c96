#pragma once

namespace asq {
inline constexpr const char* kVersion = "1.0.0";
}
