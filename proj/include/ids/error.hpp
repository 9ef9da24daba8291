#pragma once

#include <stdexcept>
#include <string>

namespace ids {

// Malformed input data (bad field count, unparseable token, unknown label).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid experiment configuration (unknown key, missing path, bad range).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated numeric precondition or failed computation.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ids
