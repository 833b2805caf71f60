#include "lpdo/error.hpp"

namespace lpdo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::UnboundSymbol: return "UnboundSymbol";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OrderUnsupported: return "OrderUnsupported";
    case ErrorCode::NonConstantCoefficients: return "NonConstantCoefficients";
    case ErrorCode::CannotNormalize: return "CannotNormalize";
    case ErrorCode::NotNormalForm: return "NotNormalForm";
    case ErrorCode::NotARoot: return "NotARoot";
    case ErrorCode::MultipleRoot: return "MultipleRoot";
    case ErrorCode::LeadingCoefficientZero: return "LeadingCoefficientZero";
    case ErrorCode::PaperFormulaMismatch: return "PaperFormulaMismatch";
    case ErrorCode::NoSimpleRoots: return "NoSimpleRoots";
    case ErrorCode::FactorizableStop: return "FactorizableStop";
    case ErrorCode::PeriodicTooSmall: return "PeriodicTooSmall";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
  }
  return "Unknown";
}

}  // namespace lpdo
