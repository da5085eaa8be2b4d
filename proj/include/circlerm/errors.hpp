#pragma once

#include "rational.hpp"

#include <stdexcept>
#include <string>

namespace circlerm {

// Malformed or mathematically invalid input (rank-deficient matrix,
// bad rational, set not aligned to the required grid).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input is well formed but violates an operation's precondition
// (bad modulus, degenerate columns where they are not allowed, ...).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an operation requires a solution-free instance and a
// solution was found; carries an explicit rational point of the kernel.
class SolutionExists : public PreconditionError {
public:
    SolutionExists(const std::string& what, RationalVector witness)
        : PreconditionError(what), witness_(std::move(witness)) {}
    const RationalVector& witness() const noexcept { return witness_; }

private:
    RationalVector witness_;
};

} // namespace circlerm
