#pragma once

#define WEYLSCALE_VERSION_MAJOR 0
#define WEYLSCALE_VERSION_MINOR 1
#define WEYLSCALE_VERSION_PATCH 0

namespace weylscale {
inline constexpr const char* version() { return "0.1.0"; }
}
