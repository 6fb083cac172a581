#pragma once

#include <string_view>

namespace ktmap {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Messages above the threshold are dropped. The initial threshold comes from
/// the KTMAP_LOG environment variable (error|warn|info|debug), default warn.
void set_log_level(LogLevel level);
LogLevel log_level();

void log(LogLevel level, std::string_view message);

inline void log_warn(std::string_view message) { log(LogLevel::Warn, message); }
inline void log_info(std::string_view message) { log(LogLevel::Info, message); }
inline void log_debug(std::string_view message) { log(LogLevel::Debug, message); }

} // namespace ktmap
