#pragma once

// Internal text helpers shared by the .cpp files: strict numeric parsing
// and the two decimal formats used on disk (shortest round-trip and
// fixed-3 trimmed).

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vfclassify/errors.hpp"

namespace vfc::detail {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Fixed 3 fractional digits with trailing zeros (and a bare '.') trimmed:
/// 30 -> "30", 30.5 -> "30.5", 12.3456 -> "12.346".
inline std::string format_fixed3(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

inline std::string trim(std::string_view sv) {
    const char* ws = " \t\r\n";
    auto b = sv.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = sv.find_last_not_of(ws);
    return std::string(sv.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            break;
        }
        out.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

/// Whole-string double parse; throws ValidationError with `what` context.
inline double parse_double(std::string_view text, const std::string& what) {
    const std::string s = trim(text);
    double value = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError(what + ": not a number: '" + s + "'");
    return value;
}

inline std::int64_t parse_int(std::string_view text, const std::string& what) {
    const std::string s = trim(text);
    std::int64_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError(what + ": not an integer: '" + s + "'");
    return value;
}

inline std::uint64_t parse_uint64(std::string_view text, const std::string& what) {
    const std::string s = trim(text);
    std::uint64_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError(what + ": not an unsigned integer: '" + s + "'");
    return value;
}

} // namespace vfc::detail
