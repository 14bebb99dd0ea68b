#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace kpls::detail {

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
    char buffer[32];
    auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

} // namespace kpls::detail
