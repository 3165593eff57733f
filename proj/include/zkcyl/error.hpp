#pragma once

#include <stdexcept>
#include <string>

namespace zkcyl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: grid sizes, domain bounds, malformed configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Array dimensions inconsistent with the discretization they claim to live on.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Arguments outside the domain of a formula (e.g. p = 5 in the energy/mass ratio).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Singular matrices and other unrecoverable linear-algebra failures.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Nonlinear solver (Newton-Krylov) did not reach its tolerance.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// A time step whose stage iteration did not converge.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, int iterations, double last_change)
        : Error(what), iterations_(iterations), last_change_(last_change) {}

    int iterations() const noexcept { return iterations_; }
    double last_change() const noexcept { return last_change_; }

private:
    int iterations_;
    double last_change_;
};

/// Snapshot files that fail magic, version, or checksum validation.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace zkcyl
