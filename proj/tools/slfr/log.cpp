#include "slfr/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace slfr::cli {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SLFR_LOG");
    if (!env) return LogLevel::Info;
    const std::string v(env);
    if (v == "quiet" || v == "0" || v == "error") return LogLevel::Quiet;
    if (v == "debug" || v == "2" || v == "trace") return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

void log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::cerr << (level == LogLevel::Debug ? "[debug] " : "[info] ") << message << '\n';
}

}  // namespace slfr::cli
