#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace stripent {

// Contract violations: bad arguments, malformed input, broken preconditions.
// CLI maps these to exit code 2.
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource guards: a computation would exceed a configured cap.
// CLI maps these to exit code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caps are overridable through environment variables so large runs can opt in.
inline long long env_cap(const char* name, long long fallback) {
    if (const char* s = std::getenv(name)) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end != s && v > 0) return v;
    }
    return fallback;
}

inline long long max_enum_sites() { return env_cap("STRIPENT_MAX_SITES", 20); }
inline long long max_columns() { return env_cap("STRIPENT_MAX_COLUMNS", 4000000); }

} // namespace stripent
