#include "ktmap/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace ktmap {
namespace {

LogLevel level_from_env() {
    const char* env = std::getenv("KTMAP_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string value(env);
    if (value == "error") return LogLevel::Error;
    if (value == "info") return LogLevel::Info;
    if (value == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

std::atomic<LogLevel>& threshold() {
    static std::atomic<LogLevel> level{level_from_env()};
    return level;
}

constexpr const char* kTags[] = {"error", "warn", "info", "debug"};

} // namespace

void set_log_level(LogLevel level) { threshold().store(level); }
LogLevel log_level() { return threshold().load(); }

void log(LogLevel level, std::string_view message) {
    if (level > threshold().load()) return;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    std::cerr << "[ktmap " << kTags[static_cast<int>(level)] << "] " << message << '\n';
}

} // namespace ktmap
