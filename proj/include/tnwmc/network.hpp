#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tnwmc/graph.hpp"
#include "tnwmc/tensor.hpp"

namespace tnwmc {

/// A nonempty collection of tensors in which no index occurs more than
/// twice. Member order is only an identity for plans.
class TensorNetwork {
 public:
  explicit TensorNetwork(std::vector<Tensor> tensors);

  std::size_t size() const { return tensors_.size(); }
  const Tensor& operator[](std::size_t i) const { return tensors_[i]; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  /// F(N): indices occurring once, ascending by id.
  const std::vector<Index>& free_indices() const { return free_; }
  /// B(N): indices occurring twice, ascending by id.
  const std::vector<Index>& bond_indices() const { return bond_; }
  bool is_bond(IndexId id) const;

  /// Largest index id in use (0 for a network without indices).
  IndexId max_index_id() const;

 private:
  std::vector<Tensor> tensors_;
  std::vector<Index> free_;
  std::vector<Index> bond_;
};

struct IndexSets {
  std::vector<Index> free;
  std::vector<Index> bond;
};

IndexSets free_and_bond_indices(const TensorNetwork& n);

/// Vertices 0..size()-1 are the tensors in network order and vertex size()
/// is the free vertex. Edge k is the index edge_index[k]; edges are ordered
/// by index id.
struct StructureGraph {
  Graph graph;
  std::vector<Index> edge_index;
  int free_vertex = 0;

  int edge_of(IndexId id) const;
};

StructureGraph structure_graph(const TensorNetwork& n);

/// Rooted binary tree whose leaves are the tensors of a network, named by
/// their position in the network.
class ContractionTree {
 public:
  struct Node {
    int left = -1;
    int right = -1;
    int tensor = -1;  // leaf payload
    bool is_leaf() const { return tensor >= 0; }
  };

  ContractionTree() = default;

  int add_leaf(int tensor);
  int add_join(int left, int right);
  void set_root(int node) { root_ = node; }

  int root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  /// Node ids in postorder (children before parents) from the root.
  std::vector<int> postorder() const;
  /// Tensor positions under the root, in postorder.
  std::vector<int> leaves() const;

  /// Left-deep tree over tensors 0..count-1.
  static ContractionTree left_deep(std::size_t count);

  /// Line format: `contract <id1> <id2> -> <id3>` per join in postorder,
  /// leaves numbered 0..count-1 by network order, joins numbered from count.
  std::string to_text() const;
  static ContractionTree from_text(const std::string& text, std::size_t tensor_count);

  friend bool operator==(const ContractionTree& a, const ContractionTree& b) { return a.to_text() == b.to_text(); }

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Throws PlanMismatch unless the leaves of `t` are exactly the tensors of
/// `n`, each once.
void check_plan(const TensorNetwork& n, const ContractionTree& t);

/// Cooperative cancellation for long executions.
struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;
  void check() const;
  static Deadline none() { return {}; }
  static Deadline after(std::chrono::duration<double> d);
};

/// Recursive pairwise contraction along the tree. Leaves are sliced by `eta`
/// as they are reached (an empty eta copies them), and children are freed as
/// soon as their parent is formed.
Tensor execute(const TensorNetwork& n, const ContractionTree& t, const Assignment& eta = {},
               const Deadline& deadline = Deadline::none());

/// Largest rank over leaves and intermediates, computed on index sets only.
/// `sliced` indices are treated as absent.
int max_rank(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced = {});

inline constexpr double kDefaultThroughput = 1e9;

/// Multiply-add count of executing the plan (transposes are free).
double op_count(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced = {});
/// op_count divided by `throughput` operations per second.
double time_cost(const TensorNetwork& n, const ContractionTree& t, double throughput = kDefaultThroughput);

/// True iff `f` maps every tensor of `m` onto a tensor of `n`, hits every
/// tensor of `n`, and each preimage network contracts to its image within
/// `rel_tol`.
bool verify_partial_contraction(const TensorNetwork& m, const TensorNetwork& n, const std::vector<int>& f,
                                double rel_tol = 1e-10);

}  // namespace tnwmc
