#pragma once

namespace qclock {
inline constexpr const char* kVersion = "0.1.0";
}
