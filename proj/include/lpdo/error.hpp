#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpdo {

/// Failure classes raised by the library. The CLI maps these to exit codes.
enum class ErrorCode {
  DivisionByZero,
  DomainError,
  PoleError,
  UnboundSymbol,
  Inconclusive,
  NotPolynomial,
  SyntaxError,
  InvalidArgument,
  OrderUnsupported,
  NonConstantCoefficients,
  CannotNormalize,
  NotNormalForm,
  NotARoot,
  MultipleRoot,
  LeadingCoefficientZero,
  PaperFormulaMismatch,
  NoSimpleRoots,
  FactorizableStop,
  PeriodicTooSmall,
  PreconditionViolation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(ErrorCode::SyntaxError, message + " at line " + std::to_string(line) +
                                          ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace lpdo
