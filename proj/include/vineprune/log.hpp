#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace vineprune {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

// Verbosity comes from VINEPRUNE_LOG (debug|info|warn|error), default warn.
inline LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("VINEPRUNE_LOG");
        if (!env) return LogLevel::Warn;
        const std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        if (v == "error") return LogLevel::Error;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log_message(LogLevel level, const std::string& message) {
    if (level < log_threshold()) return;
    const char* tag = level == LogLevel::Debug  ? "debug"
                      : level == LogLevel::Info ? "info"
                      : level == LogLevel::Warn ? "warn"
                                                : "error";
    std::fprintf(stderr, "vineprune [%s] %s\n", tag, message.c_str());
}

inline void log_debug(const std::string& m) { log_message(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::Warn, m); }
inline void log_error(const std::string& m) { log_message(LogLevel::Error, m); }

} // namespace vineprune
