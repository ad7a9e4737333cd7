#include "tnwmc/error.hpp"

namespace tnwmc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::LiteralOutOfRange: return "LiteralOutOfRange";
    case ErrorCode::UnterminatedClause: return "UnterminatedClause";
    case ErrorCode::InvalidWeightLine: return "InvalidWeightLine";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::InconsistentDomain: return "InconsistentDomain";
    case ErrorCode::BindingOutOfDomain: return "BindingOutOfDomain";
    case ErrorCode::IndexOveruse: return "IndexOveruse";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::PlanMismatch: return "PlanMismatch";
    case ErrorCode::OutOfMemory: return "OutOfMemory";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::NoHostBag: return "NoHostBag";
    case ErrorCode::MalformedPace: return "MalformedPace";
    case ErrorCode::AllPlannersFailed: return "AllPlannersFailed";
    case ErrorCode::NotFactorable: return "NotFactorable";
    case ErrorCode::TooManyFreeIndices: return "TooManyFreeIndices";
    case ErrorCode::WidthZero: return "WidthZero";
    case ErrorCode::NotABondIndex: return "NotABondIndex";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::BudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::InvalidOption: return "InvalidOption";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace tnwmc
