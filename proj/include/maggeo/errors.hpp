#pragma once

#include <stdexcept>
#include <string>

namespace maggeo {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument failed (point outside the disk, k_g < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested quantity only exists for E < 1/2 (hyperbolic centers, I_f).
class OutOfRegimeError : public Error {
public:
    using Error::Error;
};

/// Floating-point breakdown: escape towards the ideal boundary, singular
/// Jacobians, vanishing denominators.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace maggeo
