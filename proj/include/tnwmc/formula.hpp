#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tnwmc {

using Literal = std::int32_t;
using Clause = std::vector<Literal>;

inline int var_of(Literal lit) { return lit < 0 ? -lit : lit; }

/// A CNF formula over variables 1..num_vars. Construction drops tautologies
/// and duplicate literals; an empty clause is kept (it forces a zero count).
class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(int num_vars, std::vector<Clause> clauses);

  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Number of clauses in which variable `var` appears.
  int occurrences(int var) const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

struct LiteralWeights {
  double w0 = 1.0;
  double w1 = 1.0;
  friend bool operator==(const LiteralWeights&, const LiteralWeights&) = default;
};

/// Total weight map over 1..num_vars; unspecified variables weigh (1, 1).
class WeightFunction {
 public:
  WeightFunction() = default;
  explicit WeightFunction(int num_vars) : weights_(static_cast<std::size_t>(num_vars)) {}

  int num_vars() const { return static_cast<int>(weights_.size()); }
  const LiteralWeights& operator[](int var) const { return weights_.at(static_cast<std::size_t>(var - 1)); }
  void set(int var, LiteralWeights w) { weights_.at(static_cast<std::size_t>(var - 1)) = w; }

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

 private:
  std::vector<LiteralWeights> weights_;
};

struct WeightedFormula {
  CnfFormula formula;
  WeightFunction weights;
};

/// Parses DIMACS CNF with optional weight lines `w <var> <p>` (cachet style:
/// W(x,1) = p, W(x,0) = 1 - p) or `w <var> <w0> <w1>`.
WeightedFormula parse_dimacs(std::istream& in);
WeightedFormula parse_dimacs(std::string_view text);
WeightedFormula read_dimacs_file(const std::string& path);

/// Emits the extended weight form for every non-default weight pair, with
/// enough digits that parse_dimacs reproduces the doubles exactly.
std::string write_dimacs(const CnfFormula& formula, const WeightFunction& weights);

inline constexpr int kBruteForceMaxVars = 25;

/// Direct evaluation of the weighted model count by enumerating all
/// assignments. Test oracle; refuses more than kBruteForceMaxVars variables.
double brute_force_count(const CnfFormula& formula, const WeightFunction& weights);

}  // namespace tnwmc
