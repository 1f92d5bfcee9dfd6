#pragma once

#include <stdexcept>
#include <string>

namespace lambda_engine {

// Parameter set violates a model invariant (negative rate, broken level
// ordering, ...).
class InvalidParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Closed forms or linear solves hit a vanishing/singular denominator at the
// given parameter point.
class SingularParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All pumping channels off: the steady state is not unique.
class DegenerateParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integrator drove the step size below representable resolution.
class StiffnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Steady-state search exhausted its time budget; carries the last delta.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_delta)
        : std::runtime_error(what), last_delta(last_delta) {}
    double last_delta;
};

// Configuration text problem, with 1-based location.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + what),
          line(line), col(col) {}
    int line;
    int col;
};

}  // namespace lambda_engine
