// errors.hpp - Exception types shared by every qhe module

#pragma once

#include <stdexcept>
#include <string>

namespace qhe {

// Violated precondition on a physical or numerical input.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Anything that goes wrong once a computation is underway.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProfileEvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Step size collapsed below the representable resolution of t.
class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResonanceMissError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Sample grid too coarse for finite-difference verification.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Fock-space truncation left too much probability near the cutoff.
class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CycleClosureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw DomainError(message);
    }
}

}  // namespace detail

}  // namespace qhe
