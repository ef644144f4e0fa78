#include "slfr/error.hpp"

namespace slfr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MismatchedField: return "MismatchedField";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidFieldSpec: return "InvalidFieldSpec";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::IndivisibleFileLength: return "IndivisibleFileLength";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::InvalidDemand: return "InvalidDemand";
    case ErrorCode::IncompleteCoefficients: return "IncompleteCoefficients";
    case ErrorCode::InvalidArguments: return "InvalidArguments";
    case ErrorCode::SingularIntermediate: return "SingularIntermediate";
    case ErrorCode::ReconstructionMismatch: return "ReconstructionMismatch";
    case ErrorCode::MissingMessage: return "MissingMessage";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::InconsistentConstraints: return "InconsistentConstraints";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace slfr
