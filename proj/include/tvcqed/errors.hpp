#pragma once

#include <stdexcept>
#include <string>

namespace tvcqed {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (t before a piecewise schedule, |x| too large for bessel_j, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Physical or structural precondition violated by caller-supplied data.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Integrator or solver failure. `time` is the simulation time of the failure when it is known.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
    NumericalError(const std::string& what, double time)
        : Error(what + " at t=" + std::to_string(time)), time_(time), has_time_(true) {}

    double time() const noexcept { return time_; }
    bool has_time() const noexcept { return has_time_; }

private:
    double time_ = 0.0;
    bool has_time_ = false;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace tvcqed
