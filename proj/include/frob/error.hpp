#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frob {

/// Broad failure classes. Each maps onto one CLI exit code.
enum class ErrorKind {
  InvalidInput,   // exit 2
  Unsupported,    // exit 3
  NumericFailure  // exit 4
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what) : Error(ErrorKind::Unsupported, what) {}
};

class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& what) : Error(ErrorKind::NumericFailure, what) {}
};

// Specific conditions that callers (and tests) need to tell apart.

class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InvalidShift : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A sampled function failed the strict-convexity requirement.
class NonConvexError : public InvalidInput {
 public:
  NonConvexError(const std::string& what, std::size_t index)
      : InvalidInput(what + " (index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ExtrapolationError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class UnsupportedClassification : public Unsupported {
 public:
  using Unsupported::Unsupported;
};

/// Integer-difference test on irrational roots could not be settled.
class UndecidableClassification : public Unsupported {
 public:
  using Unsupported::Unsupported;
};

/// The estimator does not model series with logarithmic terms.
class LogCaseRefused : public Unsupported {
 public:
  using Unsupported::Unsupported;
};

class DiscViolation : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class DivergenceError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class RecursionBreakdown : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// A turning point of Q^2 lies on (or too near) the WKB integration ray.
class PathObstruction : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class UnreachableCriterion : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return 2;
    case ErrorKind::Unsupported: return 3;
    case ErrorKind::NumericFailure: return 4;
  }
  return 1;
}

}  // namespace frob
