#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace biphoton::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

// Verbosity comes from the BIPHOTON_LOG environment variable
// (quiet | info | debug); default is info. Messages go to stderr so that
// stdout stays reserved for data and tables.
inline Level level() {
    static Level lvl = [] {
        const char* env = std::getenv("BIPHOTON_LOG");
        if (!env) return Level::info;
        std::string s(env);
        if (s == "quiet") return Level::quiet;
        if (s == "debug") return Level::debug;
        return Level::info;
    }();
    return lvl;
}

inline void info(const std::string& msg) {
    if (level() >= Level::info) std::cerr << "[biphoton] " << msg << "\n";
}

inline void debug(const std::string& msg) {
    if (level() >= Level::debug) std::cerr << "[biphoton:debug] " << msg << "\n";
}

} // namespace biphoton::log
