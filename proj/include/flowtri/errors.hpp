#pragma once

#include <stdexcept>
#include <string>

namespace flowtri {

struct FlowtriError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance data is malformed at the container level (dangling ids, duplicate
// names, in/out lists inconsistent with edge endpoints).
struct StructuralError : FlowtriError {
    using FlowtriError::FlowtriError;
};

// A precondition on an operation's arguments does not hold.
struct InvalidInputError : FlowtriError {
    using FlowtriError::FlowtriError;
};

// An enumeration would exceed the caller-supplied limit.
struct LimitExceededError : FlowtriError {
    using FlowtriError::FlowtriError;
};

// A theorem-backed assertion failed; indicates a bug, not bad input.
struct InternalInvariantViolation : FlowtriError {
    using FlowtriError::FlowtriError;
};

}  // namespace flowtri
