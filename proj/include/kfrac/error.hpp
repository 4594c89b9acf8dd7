#pragma once

#include <stdexcept>
#include <string>

namespace kfrac {

// Argument outside the mathematical domain of a formula (x <= 0 for Gamma, lambda <= alpha, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Grid / function / matrix size or layout mismatch.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative method hit its cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user configuration (CLI maps this to exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kfrac
