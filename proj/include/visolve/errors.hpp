#pragma once

#include <stdexcept>
#include <string>

namespace visolve {

/// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A problem or solver configuration was rejected before any work was done.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped during a run (overflow, underflow, runaway line search).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace visolve
