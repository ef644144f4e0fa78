#pragma once

#include <string_view>

namespace slfr::cli {

// SLFR_LOG: quiet | info | debug (or 0 | 1 | 2). Default info.
enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level();
void log(LogLevel level, std::string_view message);

inline void log_info(std::string_view m) { log(LogLevel::Info, m); }
inline void log_debug(std::string_view m) { log(LogLevel::Debug, m); }

}  // namespace slfr::cli
