#pragma once

#include <stdexcept>
#include <string>

namespace trajloc {

// Bad user input: malformed files, unknown ids, out-of-range arguments.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure during training or inference (NaN loss, divergence).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trajloc
