#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Header/column layout problems (missing or duplicate columns).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Firing a transition that is not enabled.
class EnablingError : public Error {
public:
    using Error::Error;
};

class DiscoveryError : public Error {
public:
    using Error::Error;
};

class CompositionError : public Error {
public:
    using Error::Error;
};

}  // namespace cm
