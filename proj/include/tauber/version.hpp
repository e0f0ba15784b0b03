#pragma once

namespace tauber {
inline constexpr const char* kVersion = "0.1.0";
}
