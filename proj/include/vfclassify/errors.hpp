#pragma once

#include <stdexcept>
#include <string>

namespace vfc {

/// Invalid inputs, broken invariants, malformed file contents.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failures (missing files, unwritable destinations).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vfc
