#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace baryiter {

enum class ErrorCode {
  DomainError,
  PrecisionMismatch,
  InvalidPrecision,
  ParseError,
  DegenerateNodes,
  ZeroDerivative,
  EvaluationAtNode,
  SingularDenominator,
  ExactRootHit,
  SingularStep,
  UnsupportedCell,
  InsufficientData,
  NonConvergence,
  InvalidConfig,
  UnknownProblem,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PrecisionMismatch: return "PrecisionMismatch";
    case ErrorCode::InvalidPrecision: return "InvalidPrecision";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DegenerateNodes: return "DegenerateNodes";
    case ErrorCode::ZeroDerivative: return "ZeroDerivative";
    case ErrorCode::EvaluationAtNode: return "EvaluationAtNode";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::ExactRootHit: return "ExactRootHit";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::UnsupportedCell: return "UnsupportedCell";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

/// Raised when a stored sample already has f == 0. Not a failure: the solver
/// loop turns it into convergence at that sample.
class ExactRootHit : public Error {
 public:
  explicit ExactRootHit(std::size_t index)
      : Error(ErrorCode::ExactRootHit, "sample " + std::to_string(index) + " is an exact root"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Expression parse failure; column is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& message)
      : Error(ErrorCode::ParseError, "column " + std::to_string(column) + ": " + message),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace baryiter
