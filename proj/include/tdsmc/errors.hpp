#pragma once

#include <stdexcept>
#include <string>

namespace tdsmc {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// matnum
class DimensionError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

/// No positive definite Lyapunov solution, uncontrollable pair, non-Hurwitz target, ...
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

// plant / predictor
class HistoryUnderflowError : public Error {
public:
    HistoryUnderflowError(double t_query, double t_first, double t_last)
        : Error("history underflow: t=" + std::to_string(t_query) + " outside [" + std::to_string(t_first) +
                ", " + std::to_string(t_last) + "]"),
          t_query_(t_query) {}
    double t_query() const noexcept { return t_query_; }

private:
    double t_query_;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double t)
        : Error(what + " at t=" + std::to_string(t)), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

class AssumptionViolation : public Error {
public:
    AssumptionViolation(const std::string& what, double t)
        : Error("assumption violated: " + what + " at t=" + std::to_string(t)), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

// scenario loading: every error carries the offending field path
class ScenarioError : public Error {
public:
    ScenarioError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class SchemaError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class ScenarioDimensionError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class NotHurwitzError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class SingularSurfaceError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class UncontrollableError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class InvalidAssumptionError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class TraceFormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tdsmc
