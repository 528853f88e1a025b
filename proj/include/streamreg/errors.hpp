#pragma once

#include <stdexcept>
#include <string>

namespace streamreg {

/// Bad configuration value (out-of-range hyperparameter, unresolvable column, ...).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input file.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Query against state that has not observed any data yet.
struct empty_state_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Malformed per-example input (e.g. feature dimension mismatch).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace streamreg
