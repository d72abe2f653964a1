#pragma once

#include <stdexcept>
#include <string>

namespace flrw {

/// Quadrature or iteration stopped before reaching the requested tolerance.
/// Carries the last two estimates so the caller can judge how bad it is.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double last, double previous)
        : std::runtime_error(msg), last_estimate(last), previous_estimate(previous) {}
    double last_estimate;
    double previous_estimate;
};

/// The adaptive ODE stepper underflowed its minimum step size.
class StiffnessError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A small divisor (or an explicitly excluded frequency ratio) was hit
/// during normal-form reduction.
class ResonanceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace flrw
