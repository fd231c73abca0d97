#pragma once

#include <stdexcept>
#include <string>

namespace zp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of the operation (e.g. Im(tau) <= 0).
struct DomainError : Error {
    using Error::Error;
};

/// An iteration or series did not reach the requested accuracy.
struct NonConvergence : Error {
    using Error::Error;
};

/// Input is structurally degenerate (singular matrix, identically zero polynomial, ...).
struct DegenerateInput : Error {
    using Error::Error;
};

/// An identity that must hold by construction failed; inputs are inconsistent.
struct StructureViolation : Error {
    using Error::Error;
};

/// Configuration that the library deliberately does not handle.
struct UnsupportedConfiguration : Error {
    using Error::Error;
};

/// A polynomial evaluation was requested without a value for some variable.
struct MissingAssignment : Error {
    using Error::Error;
};

/// Malformed text input (curve files, instance files, ...).
struct ParseError : Error {
    using Error::Error;
};

}  // namespace zp
