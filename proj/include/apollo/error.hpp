#pragma once

#include <stdexcept>
#include <string>

namespace apollo {

// Base for all library failures. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold (bad argument,
// identity violated, degenerate configuration, resolution too coarse...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Generation exceeded its configured element cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Malformed packing file. line() is 1-based; 0 when not line-specific.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Packing file written by an unsupported format version.
class VersionError : public Error {
public:
    using Error::Error;
};

}  // namespace apollo
