#pragma once

namespace skein {

// Bumped whenever grading/sign conventions change; baked into cache keys and
// structured output so stale cache entries can never mix conventions.
inline constexpr const char* kConventionVersion = "gl2.b1";

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace skein
