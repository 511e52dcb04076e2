#pragma once

namespace gfa {
inline constexpr const char* kVersion = "0.1.0";
}
