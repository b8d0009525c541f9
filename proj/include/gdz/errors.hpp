#pragma once

#include <stdexcept>
#include <string>

namespace gdz {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Drazin axioms fail on the oracle output, or the rank sequence of the
/// input is ambiguous at the rank cutoff.
class AxiomViolation : public Error {
 public:
  using Error::Error;
};

class NotIdempotent : public Error {
 public:
  using Error::Error;
};

class NotTriangular : public Error {
 public:
  using Error::Error;
};

/// A truncated series still had non-negligible terms at the cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A formula was requested on input that does not satisfy its hypotheses.
/// `condition()` names the first failing condition.
class PreconditionViolated : public Error {
 public:
  PreconditionViolated(std::string condition, const std::string& what)
      : Error(what), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

class ReconciliationError : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace gdz
