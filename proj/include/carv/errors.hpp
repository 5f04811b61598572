#pragma once

#include <stdexcept>
#include <string>

namespace carv {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Vector/matrix shapes do not match the operation.
struct DimensionError : Error {
    using Error::Error;
};

/// Argument outside the domain of analyticity / outside the unit ball.
struct DomainError : Error {
    using Error::Error;
};

/// Matrix does not have the rank the operation requires.
struct RankDeficient : Error {
    using Error::Error;
};

/// A norm of the wrong representation was supplied (e.g. non-Euclidean
/// target for the Hilbert-space projection).
struct WrongNormKind : Error {
    using Error::Error;
};

/// No unimodular support entry exists for some source basis vector.
struct NotAnIsometry : Error {
    using Error::Error;
};

/// The support-row vanishing property fails at entry (k, l).
struct VanishingViolation : Error {
    VanishingViolation(const std::string& msg, int k_, int l_) : Error(msg), k(k_), l(l_) {}
    int k = -1;
    int l = -1;
};

/// The Cartan linearity check found a nonzero higher-order coefficient.
struct LinearityViolation : Error {
    using Error::Error;
};

/// A constructed object failed its verification residuals.
struct VerificationFailure : Error {
    using Error::Error;
};

/// An iterative solve stopped without reaching its certificate tolerance.
/// `achieved_gap` is the best primal-dual bracket width at termination.
struct NumericalFailure : Error {
    NumericalFailure(const std::string& msg, double gap) : Error(msg), achieved_gap(gap) {}
    double achieved_gap = 0.0;
};

/// Malformed input file or schema violation (CLI-facing).
struct InvalidInput : Error {
    using Error::Error;
};

}  // namespace carv
