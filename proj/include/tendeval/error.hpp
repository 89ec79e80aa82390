#pragma once

#include <stdexcept>
#include <string>

namespace tendeval {

// Malformed or inconsistent input. The CLI maps this to exit code 1.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerically degenerate computation (zero denominator, non-convergence).
// The CLI maps this to exit code 2.
class ComputeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tendeval
