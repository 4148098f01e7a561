#pragma once

#include <cstdint>

namespace coopra {

inline constexpr const char* kToolName = "coopra";
inline constexpr const char* kToolVersion = "1.0.0";

// Master seed used when neither config, environment nor flags supply one.
inline constexpr std::uint64_t kDefaultSeed = 20250101;

}  // namespace coopra
