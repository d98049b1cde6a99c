#pragma once

#include <stdexcept>
#include <string>

namespace cylflow {

/// Bad user-supplied configuration (names the offending field).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Array shapes do not match the grid.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter outside the mathematically admissible range.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runtime numerical failure (solver breakdown, CFL violation, ...).
struct NumericalError : std::runtime_error {
    NumericalError(const std::string& msg, double when = -1.0)
        : std::runtime_error(msg), time(when) {}
    double time;
};

}  // namespace cylflow
