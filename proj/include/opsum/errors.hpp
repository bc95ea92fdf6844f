#pragma once

#include <stdexcept>
#include <string>

namespace opsum {

// Malformed input files. Carries a line number when one is known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, long line = -1)
        : std::runtime_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Well-formed input that violates a documented contract.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace opsum
