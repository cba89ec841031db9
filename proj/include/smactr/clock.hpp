#pragma once

#include <string>

namespace smactr {

/// Environment variable that pins the clock, e.g. SMACTR_NOW=2026-01-05T09:00:00Z.
inline constexpr const char* kClockEnv = "SMACTR_NOW";

/// ISO-8601 UTC timestamp: the injected value when set, wall clock otherwise.
std::string now_timestamp();

}  // namespace smactr
