#pragma once

#include <stdexcept>
#include <string>

namespace sqed {

/// Bad or inconsistent user input (config file, CLI overrides).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver or series failed a hard numerical contract (divergence guard,
/// sign-convention violation, step-size rule).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while reading or writing outputs.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqed
