#include "smactr/clock.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

namespace smactr {

std::string now_timestamp() {
  if (const char* pinned = std::getenv(kClockEnv); pinned && *pinned) return pinned;
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace smactr
