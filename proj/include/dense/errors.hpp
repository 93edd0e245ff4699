#pragma once

#include <stdexcept>
#include <string>

namespace dense {

// Bad hyperparameters, unknown names, malformed command lines. CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or malformed input files, vocabulary mismatches. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values, degenerate operators, shape mismatches. CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A zero quaternion has no polar form and cannot act on vectors.
struct InvalidOperatorError : NumericError {
    explicit InvalidOperatorError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace dense
