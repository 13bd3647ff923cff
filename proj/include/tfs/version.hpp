#pragma once

namespace tfs {
inline constexpr const char* kToolName = "tfs";
inline constexpr const char* kToolVersion = "1.0.0";
}  // namespace tfs
