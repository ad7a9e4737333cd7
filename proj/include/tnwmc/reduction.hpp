#pragma once

#include <span>
#include <vector>

#include "tnwmc/formula.hpp"
#include "tnwmc/graph.hpp"
#include "tnwmc/network.hpp"

namespace tnwmc {

/// One index per (variable, clause) occurrence. Ids start at 1 and run
/// variable-major: all occurrences of variable 1 by clause ordinal, then
/// variable 2, and so on.
struct Occurrence {
  int var = 0;
  int clause = 0;  // 0-based clause ordinal
  IndexId id = 0;
};

std::vector<Occurrence> occurrences(const CnfFormula& f);

/// Builds the network whose contraction is the weighted model count. Tensor
/// order: A_1..A_n (one per variable) then B_1..B_m (one per clause). Every
/// index has domain 2 and appears exactly once in some A_x and once in some
/// B_C, so the network has no free indices.
TensorNetwork reduce(const CnfFormula& f, const WeightFunction& w);

/// 1 iff the literals of `clause` whose occurrence bit is set satisfy it.
/// bits[k] is the value of the occurrence index of clause[k].
int clause_tensor_entry(const Clause& clause, std::span<const std::size_t> bits);

/// Vertices 0..n-1 are variables, n..n+m-1 clauses; one edge per occurrence
/// in the order of occurrences().
Graph incidence_graph(const CnfFormula& f);

/// Vertices 0..n-1 are variables; an edge joins every pair sharing a clause.
Graph primal_graph(const CnfFormula& f);

}  // namespace tnwmc
