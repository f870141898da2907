#pragma once

#include <stdexcept>
#include <string>

namespace translume {

/// Base of every error raised by the library. The CLI maps ConfigError to
/// exit code 2 and every other Error to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Evaluation of the co-moving constitutive parameters at a point where
/// c(X) = c_g.
class HorizonSingularity : public Error {
public:
    explicit HorizonSingularity(double X)
        : Error("co-moving parameters diverge at X = " + std::to_string(X)), position(X) {}
    double position;
};

class NotTransluminal : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NoSignChange : public Error {
public:
    using Error::Error;
};

/// A quadrature, truncation or iteration did not meet its stopping rule.
/// `partial` holds the last estimate when one exists.
class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what, double partial_value = 0.0)
        : Error(what), partial(partial_value) {}
    double partial;
};

class OverflowRisk : public Error {
public:
    using Error::Error;
};

class InsufficientPeaks : public Error {
public:
    using Error::Error;
};

}  // namespace translume
