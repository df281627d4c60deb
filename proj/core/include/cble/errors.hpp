#pragma once

#include <stdexcept>
#include <string>

namespace cble {

/// Raised when a spec fails its structural invariants. Carries the offending
/// field so the CLI can produce a field-precise diagnostic (exit code 2).
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, std::string reason)
        : std::runtime_error(field + ": " + reason),
          field_(std::move(field)),
          reason_(std::move(reason)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

/// Base for runtime numerical failures (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach the requested tolerance. The achieved
/// error estimate is part of the message and available as a field.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : NumericalError(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_ = 0.0;
};

/// The integrand grows too fast against the jump-measure tail; the integral
/// does not converge and the generator value would be garbage.
class TailDivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The adaptive step shrank below 1e-12 * dt_max; reported with the state at
/// which the integrator gave up.
class StepUnderflowError : public NumericalError {
public:
    StepUnderflowError(const std::string& what, double t, double y)
        : NumericalError(what), t_(t), y_(y) {}

    double t() const noexcept { return t_; }
    double y() const noexcept { return y_; }

private:
    double t_ = 0.0;
    double y_ = 0.0;
};

/// Config file could not be parsed; message carries file/line context.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cble
