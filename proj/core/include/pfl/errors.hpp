#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pfl {

// Input outside an operation's domain (violated type invariant or precondition).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The discretisation cannot represent the requested optics.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nonlinear fit failed; carries the residual norm at the last iterate.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, double final_residual)
        : std::runtime_error(what), final_residual_(final_residual) {}

    double final_residual() const noexcept { return final_residual_; }

private:
    double final_residual_;
};

// Jacobian at the solution is rank deficient (degenerate data).
class RankDeficiencyError : public FitError {
public:
    using FitError::FitError;
};

// Numerical integration did not reach the requested tolerance.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// Malformed input file or configuration document.
class SchemaError : public std::invalid_argument {
public:
    SchemaError(const std::string& what, std::string key = {}, int line = 0)
        : std::invalid_argument(what), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

}  // namespace pfl
