#pragma once

#include <cstdint>
#include <vector>

#include "tnwmc/graph.hpp"

namespace tnwmc {

enum class EliminationHeuristic { MinFill, MinDegree };

/// Greedy elimination order on the simple graph underneath `g`. Ties are
/// broken by a per-vertex key drawn from `seed`.
std::vector<int> elimination_order(const Graph& g, EliminationHeuristic h, std::uint64_t seed);

/// Bags {v} plus the later neighbours of v at elimination time, joined into a
/// tree and made binary.
TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<int>& order);

TreeDecomposition min_fill_tree_decomposition(const Graph& g, std::uint64_t seed);
TreeDecomposition min_degree_tree_decomposition(const Graph& g, std::uint64_t seed);

/// Hangs each edge of `g` below a bag holding both endpoints, prunes the
/// edgeless parts and reshapes to degrees 1/3. Width is at most
/// width_tree(td) + 1. Requires at least one edge.
BranchDecomposition tree_to_branch(const TreeDecomposition& td, const Graph& g);

/// Leaves in `edge_order` along a spine. Always valid, width unbounded.
BranchDecomposition caterpillar_branch_decomposition(const Graph& g, const std::vector<int>& edge_order);

}  // namespace tnwmc
