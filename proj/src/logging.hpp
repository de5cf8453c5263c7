#pragma once

#include <sstream>
#include <string>

namespace voltcast {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

// Level comes from VOLTCAST_LOG ("error" | "info" | "debug") unless set
// explicitly. Messages go to stderr.
LogLevel log_level();
void set_log_level(LogLevel level);
bool set_log_level(const std::string& name);
void log_message(LogLevel level, const std::string& message);

}  // namespace voltcast

#define VC_LOG(level, expr)                                    \
  do {                                                         \
    if (static_cast<int>(level) <= static_cast<int>(::voltcast::log_level())) { \
      std::ostringstream vc_log_os_;                           \
      vc_log_os_ << expr;                                      \
      ::voltcast::log_message(level, vc_log_os_.str());        \
    }                                                          \
  } while (0)

#define VC_INFO(expr) VC_LOG(::voltcast::LogLevel::kInfo, expr)
#define VC_DEBUG(expr) VC_LOG(::voltcast::LogLevel::kDebug, expr)
#define VC_ERROR(expr) VC_LOG(::voltcast::LogLevel::kError, expr)
