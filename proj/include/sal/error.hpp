#pragma once

#include <stdexcept>
#include <string>

namespace sal {

/// Malformed or inconsistent external data: files, checkpoints, configs,
/// dataset directories. Maps to exit code 2 in the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric failure during training or inference (non-finite loss and the
/// like). Maps to exit code 3 in the CLI.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sal
