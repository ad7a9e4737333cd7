#include "tnwmc/factoring.hpp"

#include <algorithm>
#include <map>

#include "tnwmc/error.hpp"

namespace tnwmc {

namespace {

// Branch decomposition rooted at node 0, with helpers for Steiner subtrees.
class RootedBranch {
 public:
  explicit RootedBranch(const BranchDecomposition& t) : t_(t) {
    const auto n = static_cast<std::size_t>(t.tree.num_nodes());
    parent_.assign(n, -1);
    depth_.assign(n, 0);
    pre_.assign(n, 0);
    stamp_.assign(n, -1);
    local_.assign(n, -1);
    std::vector<int> stack{0};
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    int counter = 0;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      pre_[static_cast<std::size_t>(x)] = counter++;
      const auto& nb = t.tree.neighbors(x);
      for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
        if (seen[static_cast<std::size_t>(*it)]) continue;
        seen[static_cast<std::size_t>(*it)] = 1;
        parent_[static_cast<std::size_t>(*it)] = x;
        depth_[static_cast<std::size_t>(*it)] = depth_[static_cast<std::size_t>(x)] + 1;
        stack.push_back(*it);
      }
    }
    leaf_of_edge_.assign(t.leaf_edge.size(), -1);
    for (std::size_t x = 0; x < t.leaf_edge.size(); ++x) {
      const int e = t.leaf_edge[x];
      if (e >= 0) {
        if (static_cast<std::size_t>(e) >= leaf_of_edge_.size()) leaf_of_edge_.resize(static_cast<std::size_t>(e) + 1, -1);
        leaf_of_edge_[static_cast<std::size_t>(e)] = static_cast<int>(x);
      }
    }
  }

  int leaf_of_edge(int e) const { return leaf_of_edge_[static_cast<std::size_t>(e)]; }
  const Tree& tree() const { return t_.tree; }

  struct Steiner {
    std::vector<int> nodes;   // ascending node ids
    std::vector<int> degree;  // aligned with nodes
    std::vector<std::vector<int>> adj;  // local positions
    std::vector<std::pair<int, int>> arcs;  // node ids

    int position(int node) const {
      auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
      return it != nodes.end() && *it == node ? static_cast<int>(it - nodes.begin()) : -1;
    }
  };

  // Smallest subtree containing the given leaves. Walks consecutive leaves
  // in preorder, so the cost is linear in the subtree size.
  Steiner steiner(std::vector<int> leaves) {
    ++round_;
    std::sort(leaves.begin(), leaves.end(),
              [&](int a, int b) { return pre_[static_cast<std::size_t>(a)] < pre_[static_cast<std::size_t>(b)]; });
    std::vector<int> found;
    auto mark = [&](int x) {
      if (stamp_[static_cast<std::size_t>(x)] != round_) {
        stamp_[static_cast<std::size_t>(x)] = round_;
        found.push_back(x);
      }
    };
    mark(leaves.front());
    for (std::size_t k = 1; k < leaves.size(); ++k) {
      int a = leaves[k - 1];
      int b = leaves[k];
      while (a != b) {
        if (depth_[static_cast<std::size_t>(a)] >= depth_[static_cast<std::size_t>(b)]) {
          a = parent_[static_cast<std::size_t>(a)];
          mark(a);
        } else {
          mark(b);
          b = parent_[static_cast<std::size_t>(b)];
        }
      }
      mark(a);
    }
    Steiner s;
    s.nodes = found;
    std::sort(s.nodes.begin(), s.nodes.end());
    int top = s.nodes.front();
    for (int x : s.nodes) {
      if (depth_[static_cast<std::size_t>(x)] < depth_[static_cast<std::size_t>(top)]) top = x;
    }
    s.degree.assign(s.nodes.size(), 0);
    s.adj.assign(s.nodes.size(), {});
    for (std::size_t i = 0; i < s.nodes.size(); ++i) local_[static_cast<std::size_t>(s.nodes[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      const int x = s.nodes[i];
      if (x == top) continue;
      const int p = parent_[static_cast<std::size_t>(x)];
      const auto j = static_cast<std::size_t>(local_[static_cast<std::size_t>(p)]);
      s.arcs.emplace_back(std::min(x, p), std::max(x, p));
      s.adj[i].push_back(static_cast<int>(j));
      s.adj[j].push_back(static_cast<int>(i));
      ++s.degree[i];
      ++s.degree[j];
    }
    return s;
  }

 private:
  const BranchDecomposition& t_;
  std::vector<int> parent_, depth_, pre_, stamp_, local_;
  std::vector<int> leaf_of_edge_;
  int round_ = 0;
};

// Suppresses the pass-through vertices of a Steiner subtree.
DimensionTree suppress(const RootedBranch::Steiner& s, const BranchDecomposition& t,
                       const std::vector<Index>& edge_index) {
  DimensionTree dt;
  std::vector<int> dt_of(s.nodes.size(), -1);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    if (s.degree[i] == 2) continue;
    dt_of[i] = dt.tree.add_node();
    const int e = t.leaf_edge[static_cast<std::size_t>(s.nodes[i])];
    dt.leaf.push_back(s.degree[i] <= 1 && e >= 0 ? std::optional<Index>(edge_index[static_cast<std::size_t>(e)])
                                                 : std::nullopt);
    dt.origin.push_back(s.nodes[i]);
  }
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    if (dt_of[i] < 0) continue;
    for (int next : s.adj[i]) {
      int prev = static_cast<int>(i);
      int cur = next;
      while (dt_of[static_cast<std::size_t>(cur)] < 0) {
        const auto& a = s.adj[static_cast<std::size_t>(cur)];
        const int step = a[0] == prev ? a[1] : a[0];
        prev = cur;
        cur = step;
      }
      if (dt_of[i] < dt_of[static_cast<std::size_t>(cur)]) dt.tree.add_arc(dt_of[i], dt_of[static_cast<std::size_t>(cur)]);
    }
  }
  return dt;
}

std::vector<std::size_t> strides_of(const std::vector<Index>& indices) {
  std::vector<std::size_t> strides(indices.size(), 1);
  for (std::size_t k = indices.size(); k-- > 1;) strides[k - 1] = strides[k] * indices[k].domain;
  return strides;
}

// Digits of the row-major position `pos` over `indices`.
std::vector<std::size_t> digits_of(std::size_t pos, const std::vector<Index>& indices) {
  std::vector<std::size_t> d(indices.size());
  for (std::size_t k = indices.size(); k-- > 0;) {
    d[k] = pos % indices[k].domain;
    pos /= indices[k].domain;
  }
  return d;
}

}  // namespace

DimensionTree caterpillar_dimension_tree(const std::vector<Index>& indices) {
  DimensionTree dt;
  auto leaf = [&](const Index& i) {
    dt.leaf.push_back(i);
    dt.origin.push_back(-1);
    return dt.tree.add_node();
  };
  const auto r = indices.size();
  if (r == 0) return dt;
  if (r <= 2) {
    const int a = leaf(indices[0]);
    if (r == 2) dt.tree.add_arc(a, leaf(indices[1]));
    return dt;
  }
  int spine = -1;
  for (std::size_t k = 0; k + 2 < r; ++k) {
    dt.leaf.push_back(std::nullopt);
    dt.origin.push_back(-1);
    const int s = dt.tree.add_node();
    dt.tree.add_arc(s, spine < 0 ? leaf(indices[0]) : spine);
    dt.tree.add_arc(s, leaf(indices[k + 1]));
    spine = s;
  }
  dt.tree.add_arc(spine, leaf(indices[r - 1]));
  return dt;
}

DimensionTree dimension_tree_for(const Graph& g, int v, const BranchDecomposition& t,
                                 const std::vector<Index>& edge_index) {
  if (g.degree(v) == 0) return {};
  RootedBranch rb(t);
  std::vector<int> leaves;
  for (int e : g.incident(v)) leaves.push_back(rb.leaf_of_edge(e));
  return suppress(rb.steiner(leaves), t, edge_index);
}

TensorKind classify(const Tensor& a) {
  const auto& idx = a.indices();
  const auto values = a.values();
  bool uniform = true;
  for (const auto& i : idx) uniform = uniform && i.domain == (idx.empty() ? 0 : idx[0].domain);
  if (uniform) {
    bool copy = true;
    const auto strides = strides_of(idx);
    std::size_t diag_step = 0;
    for (auto s : strides) diag_step += s;
    for (std::size_t p = 0; p < values.size() && copy; ++p) {
      if (values[p] != 0.0 && (diag_step == 0 || p % diag_step != 0)) copy = false;
    }
    if (copy) return TensorKind::Copy;
  }
  std::size_t zeros = 0;
  for (double x : values) {
    if (x == 0.0) {
      ++zeros;
    } else if (x != 1.0) {
      return TensorKind::Other;
    }
  }
  return zeros == 1 ? TensorKind::Clause : TensorKind::Other;
}

FactoredTensor factor_tensor(const Tensor& a, TensorKind kind, const DimensionTree& t, IndexId& next_id) {
  const int nodes = t.tree.num_nodes();
  FactoredTensor out;
  {
    std::vector<IndexId> want, have;
    for (const auto& i : a.indices()) want.push_back(i.id);
    for (const auto& l : t.leaf) {
      if (l) have.push_back(l->id);
    }
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    if (want != have) fail(ErrorCode::IndexMismatch, "dimension tree leaves differ from the tensor's indices");
  }
  std::vector<int> internal;
  for (int x = 0; x < nodes; ++x) {
    if (!t.is_leaf(x)) internal.push_back(x);
  }
  if (a.rank() <= 3 || internal.size() <= 1) {
    out.pieces.push_back(a);
    out.piece_of.assign(static_cast<std::size_t>(nodes), 0);
    return out;
  }
  if (kind == TensorKind::Other) fail(ErrorCode::NotFactorable, "only copy and clause tensors factor above rank 3");

  std::vector<int> piece(static_cast<std::size_t>(nodes), -1);
  for (std::size_t k = 0; k < internal.size(); ++k) piece[static_cast<std::size_t>(internal[k])] = static_cast<int>(k);

  const std::size_t bond_domain = kind == TensorKind::Copy ? a.indices()[0].domain : 2;
  std::map<std::pair<int, int>, Index> bond;
  for (auto [x, y] : t.tree.arcs()) {
    if (!t.is_leaf(x) && !t.is_leaf(y)) bond[{x, y}] = Index{next_id++, bond_domain};
  }
  auto link = [&](int x, int y) -> Index {
    if (t.is_leaf(y)) return *t.leaf[static_cast<std::size_t>(y)];
    return bond.at({std::min(x, y), std::max(x, y)});
  };

  // the piece next to the least original index is special in both schemes
  int least_leaf = -1;
  for (int x = 0; x < nodes; ++x) {
    if (t.is_leaf(x) && (least_leaf < 0 || t.leaf[static_cast<std::size_t>(x)]->id <
                                               t.leaf[static_cast<std::size_t>(least_leaf)]->id)) {
      least_leaf = x;
    }
  }
  const int special = t.tree.neighbors(least_leaf).front();

  out.pieces.resize(internal.size());
  if (kind == TensorKind::Copy) {
    const std::size_t d = bond_domain;
    for (int x : internal) {
      std::vector<Index> idx;
      for (int y : t.tree.neighbors(x)) idx.push_back(link(x, y));
      Tensor p = Tensor::zeros(idx);
      const auto strides = strides_of(idx);
      std::size_t step = 0;
      for (auto s : strides) step += s;
      for (std::size_t s = 0; s < d; ++s) {
        double value = 1.0;
        if (x == special) {
          std::vector<std::size_t> digits(a.rank(), s);
          value = a.at(digits);
        }
        p.mutable_values()[s * step] = value;
      }
      out.pieces[static_cast<std::size_t>(piece[static_cast<std::size_t>(x)])] = std::move(p);
    }
  } else {
    // the single zero of a clause tensor marks its falsifying assignment
    const auto values = a.values();
    const auto zero = static_cast<std::size_t>(std::find(values.begin(), values.end(), 0.0) - values.begin());
    const auto falsifying = digits_of(zero, a.indices());
    auto false_value = [&](IndexId id) { return falsifying[static_cast<std::size_t>(a.position_of(id))]; };

    // orient from the special piece; each bond carries "some literal below is true"
    std::vector<int> parent(static_cast<std::size_t>(nodes), -2);
    std::vector<int> order{special};
    parent[static_cast<std::size_t>(special)] = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (int y : t.tree.neighbors(order[k])) {
        if (parent[static_cast<std::size_t>(y)] != -2) continue;
        parent[static_cast<std::size_t>(y)] = order[k];
        if (!t.is_leaf(y)) order.push_back(y);
      }
    }
    for (int x : internal) {
      std::vector<Index> idx;
      std::vector<char> is_bond;
      for (int y : t.tree.neighbors(x)) {
        if (y == parent[static_cast<std::size_t>(x)]) continue;
        idx.push_back(link(x, y));
        is_bond.push_back(!t.is_leaf(y));
      }
      const bool root = x == special;
      if (!root) idx.push_back(link(x, parent[static_cast<std::size_t>(x)]));
      Tensor p = Tensor::zeros(idx);
      auto pv = p.mutable_values();
      for (std::size_t pos = 0; pos < pv.size(); ++pos) {
        const auto digits = digits_of(pos, idx);
        bool any = false;
        for (std::size_t c = 0; c < is_bond.size(); ++c) {
          any = any || (is_bond[c] ? digits[c] == 1 : digits[c] != false_value(idx[c].id));
        }
        pv[pos] = root ? (any ? 1.0 : 0.0) : (digits.back() == (any ? 1u : 0u) ? 1.0 : 0.0);
      }
      out.pieces[static_cast<std::size_t>(piece[static_cast<std::size_t>(x)])] = std::move(p);
    }
  }
  out.piece_of.assign(static_cast<std::size_t>(nodes), -1);
  for (int x = 0; x < nodes; ++x) {
    out.piece_of[static_cast<std::size_t>(x)] =
        t.is_leaf(x) ? piece[static_cast<std::size_t>(t.tree.neighbors(x).front())] : piece[static_cast<std::size_t>(x)];
  }
  return out;
}

ContractionTree carving_to_contraction_tree(const TensorNetwork& m, const CarvingDecomposition& cd) {
  const int z = static_cast<int>(m.size());
  int zleaf = -1;
  for (std::size_t x = 0; x < cd.leaf_vertex.size(); ++x) {
    if (cd.leaf_vertex[x] == z && cd.tree.degree(static_cast<int>(x)) <= 1) zleaf = static_cast<int>(x);
  }
  if (zleaf < 0 || cd.tree.degree(zleaf) != 1) fail(ErrorCode::InvalidDecomposition, "carving decomposition lacks the free vertex leaf");
  const int root = cd.tree.neighbors(zleaf).front();

  ContractionTree out;
  std::vector<int> built(static_cast<std::size_t>(cd.tree.num_nodes()), -1);
  std::vector<std::pair<int, int>> stack{{root, zleaf}};  // (node, parent)
  std::vector<std::pair<int, int>> post;
  while (!stack.empty()) {
    auto [x, p] = stack.back();
    stack.pop_back();
    post.push_back({x, p});
    for (int y : cd.tree.neighbors(x)) {
      if (y != p) stack.push_back({y, x});
    }
  }
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    const auto [x, p] = *it;
    std::vector<int> kids;
    for (int y : cd.tree.neighbors(x)) {
      if (y != p) kids.push_back(built[static_cast<std::size_t>(y)]);
    }
    if (kids.empty()) {
      const int v = cd.leaf_vertex[static_cast<std::size_t>(x)];
      if (v < 0 || v >= z) fail(ErrorCode::InvalidDecomposition, "carving leaf is not a tensor");
      built[static_cast<std::size_t>(x)] = out.add_leaf(v);
    } else if (kids.size() == 2) {
      built[static_cast<std::size_t>(x)] = out.add_join(kids[0], kids[1]);
    } else {
      fail(ErrorCode::InvalidDecomposition, "carving decomposition is not binary");
    }
  }
  out.set_root(built[static_cast<std::size_t>(root)]);
  check_plan(m, out);
  return out;
}

namespace {

// Width 0 or no edges: every index joins two rank-1 tensors (or one and the
// free vertex), so pairing them up and chaining the pairs keeps rank <= 1.
FactorResult factor_trivially(const TensorNetwork& n, int width) {
  ContractionTree plan;
  std::vector<int> tops;
  std::vector<char> used(n.size(), 0);
  std::map<IndexId, int> holder;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (used[k]) continue;
    int node = plan.add_leaf(static_cast<int>(k));
    used[k] = 1;
    for (const auto& i : n[k].indices()) {
      for (std::size_t j = k + 1; j < n.size(); ++j) {
        if (!used[j] && n[j].has_index(i.id)) {
          node = plan.add_join(node, plan.add_leaf(static_cast<int>(j)));
          used[j] = 1;
        }
      }
    }
    tops.push_back(node);
  }
  int acc = tops.front();
  for (std::size_t k = 1; k < tops.size(); ++k) acc = plan.add_join(acc, tops[k]);
  plan.set_root(acc);
  FactorResult r{n, plan, {}, Graph(), {}, {}, {}};
  for (std::size_t k = 0; k < n.size(); ++k) r.origin.push_back(static_cast<int>(k));
  r.audit.branch_width = width;
  r.audit.bound = (4 * width + 2) / 3;
  r.audit.max_rank = max_rank(n, plan);
  return r;
}

void attach_leaf(LabelledTree& lt, int arc_a, int arc_b, int label) {
  const int mid = lt.tree.add_node();
  lt.label.push_back(-1);
  const int leaf = lt.tree.add_node();
  lt.label.push_back(label);
  lt.tree.remove_arc(arc_a, arc_b);
  lt.tree.add_arc(arc_a, mid);
  lt.tree.add_arc(mid, arc_b);
  lt.tree.add_arc(mid, leaf);
}

}  // namespace

FactorResult factor_branch(const TensorNetwork& n, const BranchDecomposition& t) {
  const StructureGraph sg = structure_graph(n);
  const Graph& g = sg.graph;
  const int k = static_cast<int>(n.size());
  const int zv = sg.free_vertex;
  if (g.num_edges() == 0) return factor_trivially(n, 0);
  if (auto bad = check_branch_decomposition(g, t)) fail(ErrorCode::InvalidDecomposition, *bad);
  if (n.free_indices().size() > 3) fail(ErrorCode::TooManyFreeIndices, "at most three free indices are supported");
  const int w = width_branch(g, t);
  if (w == 0) return factor_trivially(n, 0);

  RootedBranch rb(t);
  const Tree& bt = rb.tree();

  // subtrees T_v, dimension trees and factored pieces
  struct VertexPlan {
    RootedBranch::Steiner steiner;
    std::vector<int> real_node;   // branch nodes hosting a piece (or z)
    std::vector<int> real_piece;  // aligned: piece id in M, or -1 for z
  };
  std::vector<VertexPlan> vp(static_cast<std::size_t>(zv) + 1);
  std::vector<Tensor> pieces;
  std::vector<int> origin;
  IndexId next_id = n.max_index_id() + 1;
  std::vector<int> rank0_pieces;

  for (int v = 0; v <= zv; ++v) {
    auto& plan = vp[static_cast<std::size_t>(v)];
    if (g.degree(v) == 0) {
      if (v < k) {
        rank0_pieces.push_back(static_cast<int>(pieces.size()));
        pieces.push_back(n[static_cast<std::size_t>(v)]);
        origin.push_back(v);
      }
      continue;
    }
    std::vector<int> leaves;
    for (int e : g.incident(v)) leaves.push_back(rb.leaf_of_edge(e));
    plan.steiner = rb.steiner(leaves);
    const auto& st = plan.steiner;
    for (std::size_t i = 0; i < st.nodes.size(); ++i) {
      if (st.degree[i] == 3) plan.real_node.push_back(st.nodes[i]);
    }
    if (plan.real_node.empty()) plan.real_node.push_back(leaves.front());

    if (v == zv) {
      plan.real_piece.assign(plan.real_node.size(), -1);
      continue;
    }
    const Tensor& a = n[static_cast<std::size_t>(v)];
    const int base = static_cast<int>(pieces.size());
    if (a.rank() <= 3) {
      pieces.push_back(a);
      origin.push_back(v);
      plan.real_piece.push_back(base);
      continue;
    }
    const DimensionTree dt = suppress(st, t, sg.edge_index);
    const FactoredTensor ft = factor_tensor(a, classify(a), dt, next_id);
    for (auto& p : ft.pieces) {
      pieces.push_back(p);
      origin.push_back(v);
    }
    for (int node : plan.real_node) {
      int dt_node = -1;
      for (std::size_t x = 0; x < dt.origin.size(); ++x) {
        if (dt.origin[x] == node && !dt.is_leaf(static_cast<int>(x))) dt_node = static_cast<int>(x);
      }
      plan.real_piece.push_back(base + ft.piece_of[static_cast<std::size_t>(dt_node)]);
    }
  }
  const int m_size = static_cast<int>(pieces.size());

  // H, one copy of T_v per structure-graph vertex
  std::vector<std::vector<int>> hid(static_cast<std::size_t>(zv) + 1);
  std::vector<int> h_vertex, h_node, h_tdeg, h_struct;  // per H vertex
  for (int v = 0; v <= zv; ++v) {
    const auto& plan = vp[static_cast<std::size_t>(v)];
    const auto& st = plan.steiner;
    for (std::size_t i = 0; i < st.nodes.size(); ++i) {
      hid[static_cast<std::size_t>(v)].push_back(static_cast<int>(h_vertex.size()));
      h_vertex.push_back(v);
      h_node.push_back(st.nodes[i]);
      h_tdeg.push_back(st.degree[i]);
      int target = -1;  // virtual
      for (std::size_t r = 0; r < plan.real_node.size(); ++r) {
        if (plan.real_node[r] == st.nodes[i]) target = plan.real_piece[r] < 0 ? m_size : plan.real_piece[r];
      }
      h_struct.push_back(target);
    }
  }
  auto h_of = [&](int v, int node) {
    return hid[static_cast<std::size_t>(v)][static_cast<std::size_t>(vp[static_cast<std::size_t>(v)].steiner.position(node))];
  };
  Graph h(static_cast<int>(h_vertex.size()));
  for (int v = 0; v <= zv; ++v) {
    for (auto [a, b] : vp[static_cast<std::size_t>(v)].steiner.arcs) h.add_edge(h_of(v, a), h_of(v, b));
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.endpoints(e);
    const int leaf = rb.leaf_of_edge(e);
    h.add_edge(h_of(u, leaf), h_of(v, leaf));
  }

  // S, hanging the H vertices of each branch node along its arcs
  const int tn = bt.num_nodes();
  std::vector<std::vector<std::vector<int>>> slot(static_cast<std::size_t>(tn));
  for (int x = 0; x < tn; ++x) slot[static_cast<std::size_t>(x)].resize(static_cast<std::size_t>(bt.degree(x)));
  std::vector<int> round_robin(static_cast<std::size_t>(tn), 0);
  for (std::size_t hv = 0; hv < h_vertex.size(); ++hv) {
    const int x = h_node[hv];
    const auto& nb = bt.neighbors(x);
    std::size_t j = 0;
    if (h_tdeg[hv] == 3) {
      j = static_cast<std::size_t>(round_robin[static_cast<std::size_t>(x)]++ % 3);
    } else if (h_tdeg[hv] == 2) {
      // keep it on an arc of its own subtree, otherwise both of its edges cross
      const auto& st = vp[static_cast<std::size_t>(h_vertex[hv])].steiner;
      while (j + 1 < nb.size() && st.position(nb[j]) < 0) ++j;
    }
    slot[static_cast<std::size_t>(x)][j].push_back(static_cast<int>(hv));
  }
  Tree s_tree(tn);  // node x is y_x
  std::vector<int> s_label(static_cast<std::size_t>(tn), -1);
  std::vector<std::vector<int>> z_node(static_cast<std::size_t>(tn));
  for (int x = 0; x < tn; ++x) {
    for (const auto& chain : slot[static_cast<std::size_t>(x)]) {
      int prev = x;
      for (int hv : chain) {
        const int xn = s_tree.add_node();
        s_label.push_back(-1);
        const int leaf = s_tree.add_node();
        s_label.push_back(hv);
        s_tree.add_arc(prev, xn);
        s_tree.add_arc(xn, leaf);
        prev = xn;
      }
      const int zn = s_tree.add_node();
      s_label.push_back(-1);
      s_tree.add_arc(prev, zn);
      z_node[static_cast<std::size_t>(x)].push_back(zn);
    }
  }
  for (auto [a, b] : bt.arcs()) {
    const auto& na = bt.neighbors(a);
    const auto& nb = bt.neighbors(b);
    const auto ja = static_cast<std::size_t>(std::find(na.begin(), na.end(), b) - na.begin());
    const auto jb = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), a) - nb.begin());
    s_tree.add_arc(z_node[static_cast<std::size_t>(a)][ja], z_node[static_cast<std::size_t>(b)][jb]);
  }
  LabelledTree s = normalize_labelled_tree(s_tree, s_label);

  FactorResult result{TensorNetwork(pieces), ContractionTree(), origin, h, {}, {}, {}};
  result.s = {s.tree, s.label};
  result.audit.branch_width = w;
  result.audit.bound = (4 * w + 2) / 3;
  result.audit.carving_width = width_carving(h, result.s);
  for (int v = 0; v < h.num_vertices(); ++v) result.audit.max_h_degree = std::max(result.audit.max_h_degree, h.degree(v));
  {
    std::vector<int> rho(static_cast<std::size_t>(tn), 0);
    for (std::size_t hv = 0; hv < h_vertex.size(); ++hv) {
      if (h_tdeg[hv] == 3) result.audit.max_rho = std::max(result.audit.max_rho, ++rho[static_cast<std::size_t>(h_node[hv])]);
    }
  }

  // S' over struct(M), dropping the virtual vertices
  std::vector<int> relabel(s.label.size(), -1);
  for (std::size_t x = 0; x < s.label.size(); ++x) {
    if (s.label[x] >= 0) relabel[x] = h_struct[static_cast<std::size_t>(s.label[x])];
  }
  LabelledTree sp = normalize_labelled_tree(s.tree, relabel);
  int zleaf = -1;
  if (n.free_indices().empty()) {
    const auto arcs = sp.tree.arcs();
    attach_leaf(sp, arcs.front().first, arcs.front().second, m_size);
    zleaf = sp.tree.num_nodes() - 1;
  } else {
    for (std::size_t x = 0; x < sp.label.size(); ++x) {
      if (sp.label[x] == m_size) zleaf = static_cast<int>(x);
    }
  }
  for (int p : rank0_pieces) attach_leaf(sp, zleaf, sp.tree.neighbors(zleaf).front(), p);
  result.s_prime = {sp.tree, sp.label};
  result.plan = carving_to_contraction_tree(result.network, result.s_prime);
  result.audit.max_rank = max_rank(result.network, result.plan);
  return result;
}

}  // namespace tnwmc
