#pragma once

namespace walkersim {

inline constexpr const char* kLibraryVersion = "1.0.0";

// Version stamped into every JSON artifact. Readers accept any minor/patch
// of the same major and reject everything else.
inline constexpr const char* kSchemaVersion = "1.0.0";
inline constexpr int kSchemaMajor = 1;

}  // namespace walkersim
