#include "tnwmc/network.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tnwmc/error.hpp"

namespace tnwmc {

// ------------------------------------------------------------- TensorNetwork

TensorNetwork::TensorNetwork(std::vector<Tensor> tensors) : tensors_(std::move(tensors)) {
  if (tensors_.empty()) fail(ErrorCode::EmptyNetwork, "a tensor network needs at least one tensor");
  std::map<IndexId, std::pair<Index, int>> seen;
  for (const auto& t : tensors_) {
    for (const auto& i : t.indices()) {
      auto [it, inserted] = seen.try_emplace(i.id, i, 0);
      if (!inserted && it->second.first.domain != i.domain) {
        fail(ErrorCode::InconsistentDomain, "index " + std::to_string(i.id) + " has two domain sizes");
      }
      if (++it->second.second > 2) {
        fail(ErrorCode::IndexOveruse, "index " + std::to_string(i.id) + " appears in more than two tensors");
      }
    }
  }
  for (const auto& [id, entry] : seen) (entry.second == 1 ? free_ : bond_).push_back(entry.first);
}

bool TensorNetwork::is_bond(IndexId id) const {
  return std::binary_search(bond_.begin(), bond_.end(), Index{id, 1});
}

IndexId TensorNetwork::max_index_id() const {
  IndexId m = 0;
  if (!free_.empty()) m = std::max(m, free_.back().id);
  if (!bond_.empty()) m = std::max(m, bond_.back().id);
  return m;
}

IndexSets free_and_bond_indices(const TensorNetwork& n) { return {n.free_indices(), n.bond_indices()}; }

// ------------------------------------------------------------ StructureGraph

int StructureGraph::edge_of(IndexId id) const {
  auto it = std::lower_bound(edge_index.begin(), edge_index.end(), Index{id, 1});
  if (it == edge_index.end() || it->id != id) return -1;
  return static_cast<int>(it - edge_index.begin());
}

StructureGraph structure_graph(const TensorNetwork& n) {
  StructureGraph sg;
  sg.free_vertex = static_cast<int>(n.size());
  std::map<IndexId, std::vector<int>> holders;
  for (std::size_t k = 0; k < n.size(); ++k) {
    for (const auto& i : n[k].indices()) holders[i.id].push_back(static_cast<int>(k));
  }
  sg.graph = Graph(static_cast<int>(n.size()) + 1);
  for (const auto& [id, hs] : holders) {
    const Index& index = n[static_cast<std::size_t>(hs.front())].indices()[static_cast<std::size_t>(
        n[static_cast<std::size_t>(hs.front())].position_of(id))];
    sg.edge_index.push_back(index);
    sg.graph.add_edge(hs.front(), hs.size() == 2 ? hs.back() : sg.free_vertex);
  }
  return sg;
}

// ----------------------------------------------------------- ContractionTree

int ContractionTree::add_leaf(int tensor) {
  nodes_.push_back({-1, -1, tensor});
  return static_cast<int>(nodes_.size()) - 1;
}

int ContractionTree::add_join(int left, int right) {
  nodes_.push_back({left, right, -1});
  return static_cast<int>(nodes_.size()) - 1;
}

std::vector<int> ContractionTree::postorder() const {
  std::vector<int> out;
  if (root_ < 0) return out;
  std::vector<std::pair<int, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const Node& nd = node(id);
    if (nd.is_leaf() || expanded) {
      out.push_back(id);
      continue;
    }
    stack.push_back({id, true});
    stack.push_back({nd.right, false});
    stack.push_back({nd.left, false});
  }
  return out;
}

std::vector<int> ContractionTree::leaves() const {
  std::vector<int> out;
  for (int id : postorder()) {
    if (node(id).is_leaf()) out.push_back(node(id).tensor);
  }
  return out;
}

ContractionTree ContractionTree::left_deep(std::size_t count) {
  ContractionTree t;
  if (count == 0) return t;
  int acc = t.add_leaf(0);
  for (std::size_t k = 1; k < count; ++k) acc = t.add_join(acc, t.add_leaf(static_cast<int>(k)));
  t.set_root(acc);
  return t;
}

std::string ContractionTree::to_text() const {
  std::ostringstream out;
  std::map<int, int> label;
  int next = 0;
  for (const auto& nd : nodes_) next = std::max(next, nd.tensor + 1);
  for (int id : postorder()) {
    const Node& nd = node(id);
    if (nd.is_leaf()) {
      label[id] = nd.tensor;
      continue;
    }
    label[id] = next++;
    out << "contract " << label[nd.left] << ' ' << label[nd.right] << " -> " << label[id] << '\n';
  }
  return out.str();
}

ContractionTree ContractionTree::from_text(const std::string& text, std::size_t tensor_count) {
  ContractionTree t;
  std::map<int, int> node_of;
  for (std::size_t k = 0; k < tensor_count; ++k) node_of[static_cast<int>(k)] = t.add_leaf(static_cast<int>(k));
  std::istringstream in(text);
  std::string line;
  int last = tensor_count == 1 ? 0 : -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word, arrow;
    int a = 0, b = 0, c = 0;
    if (!(ls >> word)) continue;
    if (word != "contract" || !(ls >> a >> b >> arrow >> c) || arrow != "->") {
      fail(ErrorCode::PlanMismatch, "bad plan line '" + line + "'");
    }
    if (!node_of.count(a) || !node_of.count(b) || node_of.count(c) || a == b) {
      fail(ErrorCode::PlanMismatch, "plan line '" + line + "' references unknown or reused ids");
    }
    const int id = t.add_join(node_of[a], node_of[b]);
    node_of.erase(a);
    node_of.erase(b);
    node_of[c] = id;
    last = id;
  }
  if (node_of.size() != 1 || last < 0) fail(ErrorCode::PlanMismatch, "plan does not join all tensors into one root");
  t.set_root(node_of.begin()->second);
  return t;
}

void check_plan(const TensorNetwork& n, const ContractionTree& t) {
  auto leaves = t.leaves();
  std::sort(leaves.begin(), leaves.end());
  bool ok = leaves.size() == n.size();
  for (std::size_t k = 0; ok && k < leaves.size(); ++k) ok = leaves[k] == static_cast<int>(k);
  if (!ok) fail(ErrorCode::PlanMismatch, "plan leaves do not match the network's tensors");
}

// ----------------------------------------------------------------- execution

void Deadline::check() const {
  if (at && std::chrono::steady_clock::now() > *at) fail(ErrorCode::Timeout, "deadline passed during execution");
}

Deadline Deadline::after(std::chrono::duration<double> d) {
  return {std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(d)};
}

Tensor execute(const TensorNetwork& n, const ContractionTree& t, const Assignment& eta, const Deadline& deadline) {
  check_plan(n, t);
  std::vector<std::optional<Tensor>> result(t.nodes().size());
  try {
    for (int id : t.postorder()) {
      deadline.check();
      const auto& nd = t.node(id);
      if (nd.is_leaf()) {
        result[static_cast<std::size_t>(id)] = slice_tensor(n[static_cast<std::size_t>(nd.tensor)], eta);
        continue;
      }
      auto& left = result[static_cast<std::size_t>(nd.left)];
      auto& right = result[static_cast<std::size_t>(nd.right)];
      result[static_cast<std::size_t>(id)] = contract_pair(*left, *right);
      left.reset();
      right.reset();
    }
  } catch (const std::bad_alloc&) {
    fail(ErrorCode::OutOfMemory, "allocation failed during execution");
  }
  return std::move(*result[static_cast<std::size_t>(t.root())]);
}

namespace {

std::vector<Index> without(const std::vector<Index>& indices, const std::vector<Index>& sliced) {
  std::vector<Index> out;
  for (const auto& i : indices) {
    if (std::find(sliced.begin(), sliced.end(), i) == sliced.end()) out.push_back(i);
  }
  return out;
}

// Symmetric difference of two index lists (the indices of a pairwise
// contraction result).
std::vector<Index> joined(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  for (const auto& i : a) {
    if (std::find(b.begin(), b.end(), i) == b.end()) out.push_back(i);
  }
  for (const auto& j : b) {
    if (std::find(a.begin(), a.end(), j) == a.end()) out.push_back(j);
  }
  return out;
}

template <typename Visit>
void simulate(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced, Visit&& visit) {
  check_plan(n, t);
  std::vector<std::vector<Index>> idx(t.nodes().size());
  for (int id : t.postorder()) {
    const auto& nd = t.node(id);
    if (nd.is_leaf()) {
      idx[static_cast<std::size_t>(id)] = without(n[static_cast<std::size_t>(nd.tensor)].indices(), sliced);
      visit(idx[static_cast<std::size_t>(id)], nullptr, nullptr);
      continue;
    }
    auto& l = idx[static_cast<std::size_t>(nd.left)];
    auto& r = idx[static_cast<std::size_t>(nd.right)];
    idx[static_cast<std::size_t>(id)] = joined(l, r);
    visit(idx[static_cast<std::size_t>(id)], &l, &r);
  }
}

}  // namespace

int max_rank(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced) {
  std::size_t best = 0;
  simulate(n, t, sliced, [&](const std::vector<Index>& out, const std::vector<Index>*, const std::vector<Index>*) { best = std::max(best, out.size()); });
  return static_cast<int>(best);
}

double op_count(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced) {
  double ops = 0.0;
  simulate(n, t, sliced, [&](const std::vector<Index>&, const std::vector<Index>* l, const std::vector<Index>* r) {
    if (l != nullptr) ops += contraction_ops(*l, *r);
  });
  return ops;
}

double time_cost(const TensorNetwork& n, const ContractionTree& t, double throughput) {
  return op_count(n, t) / throughput;
}

bool verify_partial_contraction(const TensorNetwork& m, const TensorNetwork& n, const std::vector<int>& f,
                                double rel_tol) {
  if (f.size() != m.size()) return false;
  std::vector<std::vector<Tensor>> preimage(n.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] < 0 || static_cast<std::size_t>(f[k]) >= n.size()) return false;
    preimage[static_cast<std::size_t>(f[k])].push_back(m[k]);
  }
  try {
    for (std::size_t a = 0; a < n.size(); ++a) {
      if (preimage[a].empty()) return false;
      TensorNetwork sub(std::move(preimage[a]));
      const Tensor value = execute(sub, ContractionTree::left_deep(sub.size()));
      if (!approx_equal(value, n[a], rel_tol)) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace tnwmc
