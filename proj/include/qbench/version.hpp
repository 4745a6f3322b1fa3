#pragma once

namespace qbench {
inline constexpr const char* kToolName = "qbench";
inline constexpr const char* kToolVersion = "0.1.0";
}  // namespace qbench
