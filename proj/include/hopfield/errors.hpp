#pragma once

#include <stdexcept>
#include <string>

namespace hopfield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The lower polariton branch is not real (ω_L² ≤ 0) or a mode has negative norm.
class InstabilityError : public Error {
public:
    using Error::Error;
};

/// ω_U and ω_L coincide, so the mixing angle is undefined.
class DegenerateSpectrumError : public Error {
public:
    using Error::Error;
};

/// Covariance matrix violates the uncertainty principle.
class UnphysicalStateError : public Error {
public:
    using Error::Error;
};

/// A covariance matrix was passed in the wrong quadrature basis.
class BasisMismatchError : public Error {
public:
    using Error::Error;
};

/// Emission does not dominate absorption, so no stationary state exists.
class NoSteadyStateError : public Error {
public:
    using Error::Error;
};

/// Integrator step too coarse for the fastest rate or frequency.
class StepSizeError : public Error {
public:
    using Error::Error;
};

}  // namespace hopfield
