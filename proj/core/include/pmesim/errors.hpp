#pragma once

#include <stdexcept>
#include <string>

namespace pmesim {

// Base class for all pmesim exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical parameter (non-positive rate, finesse < 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Steady state does not exist: parametric drive at or above threshold.
class InstabilityError : public Error {
public:
    InstabilityError(double lambda, double lambda_crit)
        : Error("parametric drive lambda = " + std::to_string(lambda) +
                " is at or above the instability threshold lambda_crit = " +
                std::to_string(lambda_crit)),
          lambda_(lambda), lambda_crit_(lambda_crit) {}

    double lambda() const { return lambda_; }
    double lambda_crit() const { return lambda_crit_; }

private:
    double lambda_;
    double lambda_crit_;
};

// Config file problems; carries a line number when one is known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_ = 0;
};

// Numerical failure: quadrature non-convergence, unphysical covariance, ...
class NumericError : public Error {
public:
    using Error::Error;
};

// A mathematical invariant that must hold by construction was violated;
// signals a bug upstream, not bad user input.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace pmesim
