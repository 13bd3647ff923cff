#pragma once

#include <stdexcept>
#include <string>

namespace tfs {

// Bad arguments, invalid configurations, violated preconditions.
// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// File access and parse failures (exit code 1).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine could not produce a meaningful result.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfs
