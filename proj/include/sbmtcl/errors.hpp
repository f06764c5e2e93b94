// errors.hpp — Exception hierarchy shared across the library

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace sbmtcl {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters, bad domains, malformed configuration input.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A computation ran but produced an unusable result (reality check failed,
// singular generator, residue fit did not stabilize, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

// Quadrature or summation hit its subdivision/term budget before reaching the
// requested tolerance. Carries the best value seen so far.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::complex<double> best, double error_estimate)
        : NumericalError(what), best_estimate(best), error_estimate(error_estimate) {}

    std::complex<double> best_estimate;
    double error_estimate;
};

// A cache or precomputed grid does not cover what the caller asked for.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

} // namespace sbmtcl
