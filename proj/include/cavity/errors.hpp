#pragma once

#include <stdexcept>
#include <string>

namespace cavity {

// Error taxonomy shared by every module. The C API maps each type onto a
// distinct status code.

/// Violated precondition on a constructor or operation argument.
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A monotone root solve could not bracket or converge.
class BracketError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to meet its tolerance.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_error() const noexcept { return achieved_; }

  private:
    double achieved_;
};

/// Invalid run configuration; carries the offending field path.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// An iterative limit (series tail, fit) failed to settle.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace cavity
