// errors.hpp: exception types shared by the physics modules and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace qbsim {

// Bad input: out-of-range parameters, mismatched dimensions, malformed config.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ValidationError {
public:
    DimensionMismatch(const std::string& where, std::size_t lhs, std::size_t rhs)
        : ValidationError(where + ": dimension mismatch (" + std::to_string(lhs) +
                          " vs " + std::to_string(rhs) + ")") {}
};

// A numerical invariant broke during a computation (trace drift, lost positivity, ...).
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qbsim
