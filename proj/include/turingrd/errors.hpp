#pragma once

#include <stdexcept>
#include <string>

namespace turingrd {

/// Analysis-domain failures (bad parameter regime, singular matrices, ...).
/// The CLI maps these to exit code 2.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoInteriorEquilibrium : DomainError {
    using DomainError::DomainError;
};

struct EmptyWindow : DomainError {
    using DomainError::DomainError;
};

struct WindowViolation : DomainError {
    using DomainError::DomainError;
};

struct NotSingular : DomainError {
    using DomainError::DomainError;
};

struct GridTooSmall : DomainError {
    using DomainError::DomainError;
};

struct GridMismatch : DomainError {
    using DomainError::DomainError;
};

struct StepRejected : DomainError {
    using DomainError::DomainError;
};

/// A node became NaN/Inf during time integration. CLI exit code 3.
struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration document problems (unknown key, bad value, ...). CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace turingrd
