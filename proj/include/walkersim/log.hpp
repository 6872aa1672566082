#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace walkersim {

enum class LogLevel { kOff = 0, kError, kWarn, kInfo, kDebug };

// Level comes from WALKERSIM_LOG (error|warn|info|debug), read once.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("WALKERSIM_LOG");
    if (!env) return LogLevel::kWarn;
    if (std::strcmp(env, "off") == 0) return LogLevel::kOff;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (level > log_level() || level == LogLevel::kOff) return;
  const char* tag = "?";
  switch (level) {
    case LogLevel::kError: tag = "error"; break;
    case LogLevel::kWarn: tag = "warn"; break;
    case LogLevel::kInfo: tag = "info"; break;
    case LogLevel::kDebug: tag = "debug"; break;
    default: break;
  }
  std::fprintf(stderr, "[walkersim %s] %s\n", tag, msg.c_str());
}

inline void log_info(const std::string& msg) { log(LogLevel::kInfo, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::kWarn, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::kDebug, msg); }

}  // namespace walkersim
