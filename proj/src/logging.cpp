#include "logging.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace voltcast {

namespace {

std::atomic<int> g_level{-1};
std::mutex g_mutex;

int level_from_env() {
  const char* env = std::getenv("VOLTCAST_LOG");
  if (env == nullptr) return static_cast<int>(LogLevel::kError);
  const std::string name(env);
  if (name == "debug") return static_cast<int>(LogLevel::kDebug);
  if (name == "info") return static_cast<int>(LogLevel::kInfo);
  return static_cast<int>(LogLevel::kError);
}

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::kError: return "error";
    case LogLevel::kInfo: return "info";
    case LogLevel::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() {
  int level = g_level.load(std::memory_order_relaxed);
  if (level < 0) {
    level = level_from_env();
    g_level.store(level, std::memory_order_relaxed);
  }
  return static_cast<LogLevel>(level);
}

void set_log_level(LogLevel level) {
  g_level.store(static_cast<int>(level), std::memory_order_relaxed);
}

bool set_log_level(const std::string& name) {
  if (name == "error") { set_log_level(LogLevel::kError); return true; }
  if (name == "info") { set_log_level(LogLevel::kInfo); return true; }
  if (name == "debug") { set_log_level(LogLevel::kDebug); return true; }
  return false;
}

void log_message(LogLevel level, const std::string& message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[voltcast:%s] %s\n", level_tag(level), message.c_str());
}

}  // namespace voltcast
