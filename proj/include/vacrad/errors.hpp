#ifndef VACRAD_ERRORS_HPP
#define VACRAD_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace vacrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: non-positive frequencies, forbidden special-function arguments, ...
class DomainError : public Error {
public:
    using Error::Error;
};

/// A time outside the sampled range of a profile or solution.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// A contract precondition does not hold (flatness, grid coverage, unsupported combination).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + format(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    static std::string format(double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    }

    double achieved_;
};

/// Derived quantities violate an identity they must satisfy (e.g. |u|^2 - |v|^2 = 1).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration failed validation; the message names the offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : Error(field + ": " + message), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace vacrad

#endif // VACRAD_ERRORS_HPP
