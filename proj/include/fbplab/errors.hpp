#pragma once

#include <stdexcept>
#include <string>

namespace fbp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical scheme left its admissible range.
class InstabilityError : public Error {
public:
    using Error::Error;
};

/// The computational window no longer brackets the object of interest.
class WindowError : public Error {
public:
    using Error::Error;
};

/// Caller supplied an inconsistent or out-of-range parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An estimate could not reach the requested precision.
class PrecisionError : public Error {
public:
    PrecisionError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Initial data violates the hypotheses of a regime-specific prediction.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace fbp
