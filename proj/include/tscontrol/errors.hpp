#pragma once

#include <stdexcept>
#include <string>

namespace tsc {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input: bad documents, bad grid specs, off-grid times, dimension mismatches.
struct InputError : Error {
    using Error::Error;
};

// Mathematically well-formed input that violates a precondition of the requested
// operation: nonregressive system, singular Gramian, unsupported multiplicity, ...
struct PreconditionError : Error {
    using Error::Error;
};

} // namespace tsc
