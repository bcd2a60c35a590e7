#pragma once

#include <stdexcept>
#include <string>

namespace sigshift {

// Invalid user-supplied configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A generator refused its parameters, e.g. means leaving [0,1] (CLI exit code 3).
class GeneratorError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed environment or aggregate file. Carries the offending line when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace sigshift
