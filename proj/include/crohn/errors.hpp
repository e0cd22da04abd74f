#pragma once

#include <stdexcept>
#include <string>

namespace crohn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs outside the mathematical domain of an operation (negative densities,
/// non-finite values, invalid parameters, time step above the stability bound).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A consistency check between two independent routes failed. Always a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

/// The requested equilibrium cannot be held with a positive porosity feedback.
class InfeasibleCalibration : public Error {
public:
    using Error::Error;
};

/// Non-negativity, the carrying-capacity bound or finiteness was lost during
/// time integration.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// The field is constant; no nonzero spectral mode exists.
class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed or failed validation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}

    /// 1-based line number, 0 when the error is not tied to a line.
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace crohn
