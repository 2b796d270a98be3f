#pragma once

#include <stdexcept>

namespace deconv {

// Invalid configuration or arguments (CLI maps this to exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numeric procedure cannot continue (CLI exit code 4).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File I/O failure (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace deconv
