#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnwmc {

enum class ErrorCode {
  // formula input
  MalformedHeader,
  LiteralOutOfRange,
  UnterminatedClause,
  InvalidWeightLine,
  TooManyVariables,
  // tensors and networks
  IndexMismatch,
  InconsistentDomain,
  BindingOutOfDomain,
  IndexOveruse,
  EmptyNetwork,
  PlanMismatch,
  OutOfMemory,
  // graphs and decompositions
  InvalidGraph,
  InvalidDecomposition,
  NoHostBag,
  MalformedPace,
  AllPlannersFailed,
  // factoring
  NotFactorable,
  TooManyFreeIndices,
  WidthZero,
  // slicing
  NotABondIndex,
  NoCandidates,
  BudgetInfeasible,
  // driver
  Timeout,
  InvalidOption,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace tnwmc
