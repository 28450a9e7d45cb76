#ifndef DEPHASE_ERRORS_HPP
#define DEPHASE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dephase {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Tabulated model evaluated outside its sample range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the given model family (e.g. Gamma0(inf) for ohmic).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Invalid construction parameters (sequence ordering, config values, ...).
class ParamError : public Error {
public:
    using Error::Error;
};

// Quadrature failed to reach the requested tolerance; carries the achieved estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved, double requested)
        : Error(what), achieved_error(achieved), requested_error(requested) {}
    double achieved_error;
    double requested_error;
};

// Iterative scan exceeded its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Sampled data too coarse for the requested analysis.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Pulse-spacing constraint violated (enforced mode).
class ConstraintError : public Error {
public:
    using Error::Error;
};

} // namespace dephase

#endif
