#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tnwmc {

/// Undirected multigraph on vertices 0..n-1. Edge ids are positions in
/// edges(); parallel edges are allowed, self-loops are not.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_vertices, std::vector<std::pair<int, int>> edges = {});

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::pair<int, int>& endpoints(int edge) const { return edges_[static_cast<std::size_t>(edge)]; }
  /// delta(v): ids of edges incident to v, ascending.
  const std::vector<int>& incident(int vertex) const { return incident_[static_cast<std::size_t>(vertex)]; }
  int degree(int vertex) const { return static_cast<int>(incident(vertex).size()); }

  int add_edge(int u, int v);

  /// Neighbour lists of the simple graph underneath (parallel edges merged).
  std::vector<std::vector<int>> simple_adjacency() const;

 private:
  int num_vertices_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> incident_;
};

/// A tree given by adjacency lists. Decompositions use it unrooted; degree
/// constraints are checked by the validators, not by the container.
class Tree {
 public:
  Tree() = default;
  explicit Tree(int num_nodes) : adj_(static_cast<std::size_t>(num_nodes)) {}

  int num_nodes() const { return static_cast<int>(adj_.size()); }
  int add_node();
  void add_arc(int a, int b);
  void remove_arc(int a, int b);
  const std::vector<int>& neighbors(int n) const { return adj_[static_cast<std::size_t>(n)]; }
  int degree(int n) const { return static_cast<int>(neighbors(n).size()); }
  std::vector<std::pair<int, int>> arcs() const;  // each arc once, (a < b)

  /// Connected and acyclic (a forest with a single component).
  bool is_tree() const;
  /// Every node has degree 1 or 3 (or the tree is a single node).
  bool is_unrooted_binary() const;

  /// Nodes reachable from `start` without crossing the arc (start, blocked).
  std::vector<int> side_of(int start, int blocked) const;

 private:
  std::vector<std::vector<int>> adj_;
};

struct TreeDecomposition {
  Tree tree;
  std::vector<std::vector<int>> bags;  // per tree node, sorted graph vertices
};

/// Leaves are labelled with graph edge ids; internal nodes carry -1.
struct BranchDecomposition {
  Tree tree;
  std::vector<int> leaf_edge;
};

/// Leaves are labelled with graph vertex ids; internal nodes carry -1.
struct CarvingDecomposition {
  Tree tree;
  std::vector<int> leaf_vertex;
};

/// Result of a validator: empty on success, otherwise the violated condition.
using Violation = std::optional<std::string>;

/// Checks the three tree-decomposition conditions (vertex cover, edge cover,
/// connectivity). `require_binary` also demands degrees 1 or 3.
Violation check_tree_decomposition(const Graph& g, const TreeDecomposition& td, bool require_binary = false);
Violation check_branch_decomposition(const Graph& g, const BranchDecomposition& bd);
Violation check_carving_decomposition(const Graph& g, const CarvingDecomposition& cd);

/// Widths throw InvalidDecomposition when the decomposition does not validate.
int width_tree(const Graph& g, const TreeDecomposition& td);
/// Leaves-to-root sweep over boundary vertex multiplicities.
int width_branch(const Graph& g, const BranchDecomposition& bd);
int width_carving(const Graph& g, const CarvingDecomposition& cd);

/// Per-arc reference computations: for every arc, split the leaves and count
/// directly. Quadratic; used as oracles and in audits.
int width_branch_bruteforce(const Graph& g, const BranchDecomposition& bd);
int width_carving_bruteforce(const Graph& g, const CarvingDecomposition& cd);

/// Splits nodes of degree > 3 into chains of bag copies and gives degree-2
/// nodes a pendant copy, so every node ends with degree 1 or 3. Width is
/// unchanged.
TreeDecomposition make_binary(TreeDecomposition td);

/// A tree with an integer label per node (-1 for unlabelled).
struct LabelledTree {
  Tree tree;
  std::vector<int> label;
};

/// Repeatedly drops unlabelled leaves, smooths unlabelled degree-2 nodes and
/// splits nodes of degree > 3, then renumbers the survivors in their
/// original order.
LabelledTree normalize_labelled_tree(const Tree& t, const std::vector<int>& label);

}  // namespace tnwmc
