#pragma once

#include <stdexcept>
#include <string>

namespace outage {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed call: bad index, too few samples, inconsistent sizes.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// The model cannot serve the request (e.g. no MGF for lognormal fading).
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Evaluation point outside the convergence strip of a CGF.
class StripError : public Error {
public:
    using Error::Error;
};

// No saddle point inside the strip.
class SaddleError : public Error {
public:
    using Error::Error;
};

// Integral that is infinite for the requested parameters.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Quadrature budget exhausted before reaching the tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double partial, double err_estimate)
        : Error(what), partial_(partial), err_(err_estimate) {}
    double partial() const noexcept { return partial_; }
    double err_estimate() const noexcept { return err_; }

private:
    double partial_;
    double err_;
};

} // namespace outage
