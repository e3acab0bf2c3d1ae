#pragma once

namespace fatoulab {

inline constexpr const char* kArtifactName = "fatoulab";
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace fatoulab
