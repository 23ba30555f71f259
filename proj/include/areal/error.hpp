#pragma once

#include <stdexcept>
#include <string>

namespace areal {

/// Data or numeric failure: unreadable input, degenerate statistics,
/// singular fits.  Maps to CLI exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration: parameter out of range, incompatible options.
/// Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace areal
