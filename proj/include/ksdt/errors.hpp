#pragma once

#include <stdexcept>
#include <string>

namespace ksdt {

// Invalid or inconsistent user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite kernel/score values or a violated numeric invariant
// (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ksdt
