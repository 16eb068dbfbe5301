#pragma once

namespace modspace {
inline constexpr const char* kVersion = "0.1.0";
}
