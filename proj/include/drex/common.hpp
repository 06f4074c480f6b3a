#pragma once

#include <stdexcept>
#include <string>

namespace drex {

// Malformed or inconsistent input data. The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad invocation: unknown config key, missing input path and the like.
// The CLI maps this to exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace drex
