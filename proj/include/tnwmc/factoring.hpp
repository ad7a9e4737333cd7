#pragma once

#include <optional>
#include <vector>

#include "tnwmc/graph.hpp"
#include "tnwmc/network.hpp"

namespace tnwmc {

/// A tree whose leaves are the indices of one tensor. Internal vertices
/// become the pieces of the factored tensor.
struct DimensionTree {
  Tree tree;
  std::vector<std::optional<Index>> leaf;  // per node; empty on internal nodes
  std::vector<int> origin;                 // per node: branch-decomposition node, or -1

  bool is_leaf(int node) const { return leaf[static_cast<std::size_t>(node)].has_value(); }
};

/// Caterpillar dimension tree over `indices` in the given order.
DimensionTree caterpillar_dimension_tree(const std::vector<Index>& indices);

/// The smallest subtree of `t` spanning the leaves of the edges incident to
/// `v`, with pass-through vertices suppressed. `edge_index` names the index
/// of each graph edge.
DimensionTree dimension_tree_for(const Graph& g, int v, const BranchDecomposition& t,
                                 const std::vector<Index>& edge_index);

enum class TensorKind { Copy, Clause, Other };

/// Copy: nonzero only where all indices agree. Clause: 0/1 entries with a
/// single zero. Copy wins when both apply.
TensorKind classify(const Tensor& a);

struct FactoredTensor {
  std::vector<Tensor> pieces;
  /// Per dimension-tree node: the piece it maps to. Internal nodes map to
  /// their own piece, leaves to the piece holding their index.
  std::vector<int> piece_of;
};

/// Replaces `a` by a tree of pieces shaped like `t`, one per internal node.
/// Tensors of rank <= 3 come back whole. New bond ids are taken from
/// `next_id`, which is advanced. Throws NotFactorable for Other tensors of
/// rank > 3.
FactoredTensor factor_tensor(const Tensor& a, TensorKind kind, const DimensionTree& t, IndexId& next_id);

/// Remove the free-vertex leaf (vertex m.size()) and root at its neighbour.
/// Leaves of `cd` are struct(m) vertices.
ContractionTree carving_to_contraction_tree(const TensorNetwork& m, const CarvingDecomposition& cd);

struct FactorAudit {
  int branch_width = 0;
  int bound = 0;          // ceil(4w/3)
  int carving_width = 0;  // of S over H
  int max_rank = 0;       // of the final plan over M
  int max_rho = 0;        // largest |rho(n)|
  int max_h_degree = 0;
  bool ok() const { return carving_width <= bound && max_rank <= bound; }
};

struct FactorResult {
  TensorNetwork network;         // M
  ContractionTree plan;          // over M
  std::vector<int> origin;       // tensor of N that each piece of M comes from
  Graph h;                       // simplified structure graph (empty when w = 0)
  CarvingDecomposition s;        // carving decomposition of h
  CarvingDecomposition s_prime;  // carving decomposition of struct(M)
  FactorAudit audit;
};

/// Factors every tensor of `n` along the branch decomposition `t` of
/// struct(n) and builds a plan for the result. Width 0 (and an edgeless
/// structure graph) is handled directly with M = N.
FactorResult factor_branch(const TensorNetwork& n, const BranchDecomposition& t);

}  // namespace tnwmc
