#pragma once

#include <stdexcept>
#include <string>

namespace rootstat {

/// Likelihood term of the form k/x with k > 0 and x = 0 (or a density hitting
/// the floor at a sample point in a way that cannot be regularized).
class SingularLikelihoodError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Protocol cannot support estimation (singular hermitian Fisher matrix, or a
/// completeness check demanded where none holds).
class IncompleteProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejection-sampling envelope accepted too few proposals.
class EnvelopeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigenfunctions do not decay at the grid boundary.
class BoundaryLeakError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rootstat
