#pragma once

#include <stdexcept>
#include <string>

namespace angio {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An iterative solver stopped before reaching its target.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved_residual, int iterations)
        : Error(what), residual_(achieved_residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// A time step could not be taken (stability bound violated, positivity lost, solve failed).
class StepFailure : public Error {
public:
    using Error::Error;
};

}  // namespace angio
