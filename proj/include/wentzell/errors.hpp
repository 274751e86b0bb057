#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wentzell {

/// Precondition violated by the caller (bad sizes, bad parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation requested on an object whose state does not support it.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structurally well-formed input that violates a mesh or matrix invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix(std::size_t column, double pivot)
      : std::runtime_error("zero pivot at column " + std::to_string(column) +
                           " (|pivot| = " + std::to_string(pivot) + ")"),
        column_(column), pivot_(pivot) {}
  std::size_t column() const noexcept { return column_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t column_;
  double pivot_;
};

/// Iterative solver gave up; keeps the best iterate and the residual history.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, std::vector<std::complex<double>> best,
                std::vector<double> history)
      : std::runtime_error(what), best_(std::move(best)), history_(std::move(history)) {}
  const std::vector<std::complex<double>>& best_iterate() const noexcept { return best_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<std::complex<double>> best_;
  std::vector<double> history_;
};

/// A linear solve failed inside a resolvent or time step.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double lambda)
      : std::runtime_error(what), lambda_(lambda) {}
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// A sampled form value left the sector; the offending vector is attached.
class SectorViolation : public std::runtime_error {
 public:
  SectorViolation(const std::string& what, std::vector<std::complex<double>> witness,
                  std::complex<double> value)
      : std::runtime_error(what), witness_(std::move(witness)), value_(value) {}
  const std::vector<std::complex<double>>& witness() const noexcept { return witness_; }
  std::complex<double> value() const noexcept { return value_; }

 private:
  std::vector<std::complex<double>> witness_;
  std::complex<double> value_;
};

}  // namespace wentzell
