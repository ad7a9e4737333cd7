#include "tnwmc/graph.hpp"

#include <algorithm>
#include <set>
#include <numeric>

#include "tnwmc/error.hpp"

namespace tnwmc {

// --------------------------------------------------------------------- Graph

Graph::Graph(int num_vertices, std::vector<std::pair<int, int>> edges)
    : num_vertices_(num_vertices), incident_(static_cast<std::size_t>(std::max(num_vertices, 0))) {
  if (num_vertices < 0) fail(ErrorCode::InvalidGraph, "negative vertex count");
  for (auto [u, v] : edges) add_edge(u, v);
}

int Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= num_vertices_ || v >= num_vertices_) {
    fail(ErrorCode::InvalidGraph, "edge endpoint out of range");
  }
  if (u == v) fail(ErrorCode::InvalidGraph, "self-loop on vertex " + std::to_string(u));
  const int id = num_edges();
  edges_.emplace_back(u, v);
  incident_[static_cast<std::size_t>(u)].push_back(id);
  incident_[static_cast<std::size_t>(v)].push_back(id);
  return id;
}

std::vector<std::vector<int>> Graph::simple_adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_vertices_));
  for (auto [u, v] : edges_) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

// ---------------------------------------------------------------------- Tree

int Tree::add_node() {
  adj_.emplace_back();
  return num_nodes() - 1;
}

void Tree::add_arc(int a, int b) {
  adj_[static_cast<std::size_t>(a)].push_back(b);
  adj_[static_cast<std::size_t>(b)].push_back(a);
}

void Tree::remove_arc(int a, int b) {
  auto drop = [](std::vector<int>& list, int x) {
    auto it = std::find(list.begin(), list.end(), x);
    if (it != list.end()) list.erase(it);
  };
  drop(adj_[static_cast<std::size_t>(a)], b);
  drop(adj_[static_cast<std::size_t>(b)], a);
}

std::vector<std::pair<int, int>> Tree::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < num_nodes(); ++a) {
    for (int b : neighbors(a)) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

bool Tree::is_tree() const {
  if (num_nodes() == 0) return false;
  std::size_t arc_count = 0;
  for (const auto& list : adj_) arc_count += list.size();
  if (arc_count / 2 + 1 != adj_.size()) return false;
  return side_of(0, -1).size() == adj_.size();
}

bool Tree::is_unrooted_binary() const {
  if (num_nodes() == 1) return true;
  return std::all_of(adj_.begin(), adj_.end(), [](const auto& l) { return l.size() == 1 || l.size() == 3; });
}

std::vector<int> Tree::side_of(int start, int blocked) const {
  std::vector<int> out{start};
  std::vector<char> seen(adj_.size(), 0);
  seen[static_cast<std::size_t>(start)] = 1;
  if (blocked >= 0) seen[static_cast<std::size_t>(blocked)] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (int next : neighbors(out[head])) {
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = 1;
        out.push_back(next);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- validators

namespace {

struct Rooted {
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<int> preorder;
};

Rooted root_at(const Tree& t, int root) {
  Rooted r;
  r.parent.assign(static_cast<std::size_t>(t.num_nodes()), -1);
  r.depth.assign(static_cast<std::size_t>(t.num_nodes()), 0);
  std::vector<int> stack{root};
  std::vector<char> seen(static_cast<std::size_t>(t.num_nodes()), 0);
  seen[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    r.preorder.push_back(n);
    for (int c : t.neighbors(n)) {
      if (seen[static_cast<std::size_t>(c)]) continue;
      seen[static_cast<std::size_t>(c)] = 1;
      r.parent[static_cast<std::size_t>(c)] = n;
      r.depth[static_cast<std::size_t>(c)] = r.depth[static_cast<std::size_t>(n)] + 1;
      stack.push_back(c);
    }
  }
  return r;
}

// Shared leaf-labelling check for branch and carving decompositions.
Violation check_leaf_bijection(const Tree& tree, const std::vector<int>& labels, int universe, const char* what) {
  if (!tree.is_tree()) return std::string("decomposition tree is not a tree");
  if (!tree.is_unrooted_binary()) return std::string("decomposition tree has a node of degree other than 1 or 3");
  if (static_cast<int>(labels.size()) != tree.num_nodes()) return std::string("label vector size mismatch");
  std::vector<int> hits(static_cast<std::size_t>(universe), 0);
  for (int n = 0; n < tree.num_nodes(); ++n) {
    const bool leaf = tree.degree(n) <= 1;
    const int label = labels[static_cast<std::size_t>(n)];
    if (!leaf) {
      if (label != -1) return std::string("internal node ") + std::to_string(n) + " carries a label";
      continue;
    }
    if (label < 0 || label >= universe) return std::string("leaf ") + std::to_string(n) + " is not a graph " + what;
    ++hits[static_cast<std::size_t>(label)];
  }
  for (int x = 0; x < universe; ++x) {
    if (hits[static_cast<std::size_t>(x)] != 1) {
      return std::string("graph ") + what + " " + std::to_string(x) + " appears " +
             std::to_string(hits[static_cast<std::size_t>(x)]) + " times as a leaf";
    }
  }
  return std::nullopt;
}

}  // namespace

Violation check_tree_decomposition(const Graph& g, const TreeDecomposition& td, bool require_binary) {
  if (!td.tree.is_tree()) return std::string("decomposition tree is not a tree");
  if (static_cast<int>(td.bags.size()) != td.tree.num_nodes()) return std::string("bag count differs from node count");
  if (require_binary && !td.tree.is_unrooted_binary()) return std::string("tree is not unrooted binary");
  std::vector<std::vector<int>> holders(static_cast<std::size_t>(g.num_vertices()));
  for (int n = 0; n < td.tree.num_nodes(); ++n) {
    for (int v : td.bags[static_cast<std::size_t>(n)]) {
      if (v < 0 || v >= g.num_vertices()) return std::string("bag mentions unknown vertex");
      holders[static_cast<std::size_t>(v)].push_back(n);
    }
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (holders[static_cast<std::size_t>(v)].empty()) {
      return "vertex cover: vertex " + std::to_string(v) + " is in no bag";
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.endpoints(e);
    bool hosted = false;
    for (int n : holders[static_cast<std::size_t>(u)]) {
      const auto& bag = td.bags[static_cast<std::size_t>(n)];
      if (std::find(bag.begin(), bag.end(), v) != bag.end()) {
        hosted = true;
        break;
      }
    }
    if (!hosted) return "edge cover: edge " + std::to_string(e) + " has no bag with both endpoints";
  }
  // the holders of v induce a connected subtree.
  std::vector<char> mark(static_cast<std::size_t>(td.tree.num_nodes()), 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& hs = holders[static_cast<std::size_t>(v)];
    for (int n : hs) mark[static_cast<std::size_t>(n)] = 1;
    std::vector<int> queue{hs.front()};
    mark[static_cast<std::size_t>(hs.front())] = 2;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int next : td.tree.neighbors(queue[head])) {
        if (mark[static_cast<std::size_t>(next)] == 1) {
          mark[static_cast<std::size_t>(next)] = 2;
          queue.push_back(next);
        }
      }
    }
    const bool connected = queue.size() == hs.size();
    for (int n : hs) mark[static_cast<std::size_t>(n)] = 0;
    if (!connected) return "connectivity: bags holding vertex " + std::to_string(v) + " are disconnected";
  }
  return std::nullopt;
}

Violation check_branch_decomposition(const Graph& g, const BranchDecomposition& bd) {
  if (g.num_edges() == 0) return std::string("branch decompositions need at least one edge");
  return check_leaf_bijection(bd.tree, bd.leaf_edge, g.num_edges(), "edge");
}

Violation check_carving_decomposition(const Graph& g, const CarvingDecomposition& cd) {
  if (g.num_vertices() == 0) return std::string("carving decompositions need at least one vertex");
  return check_leaf_bijection(cd.tree, cd.leaf_vertex, g.num_vertices(), "vertex");
}

// -------------------------------------------------------------------- widths

int width_tree(const Graph& g, const TreeDecomposition& td) {
  if (auto v = check_tree_decomposition(g, td)) fail(ErrorCode::InvalidDecomposition, *v);
  std::size_t widest = 0;
  for (const auto& bag : td.bags) widest = std::max(widest, bag.size());
  return static_cast<int>(widest) - 1;
}

int width_branch(const Graph& g, const BranchDecomposition& bd) {
  if (auto v = check_branch_decomposition(g, bd)) fail(ErrorCode::InvalidDecomposition, *v);
  const Rooted r = root_at(bd.tree, 0);
  using Counts = std::vector<std::pair<int, int>>;  // (vertex, incidences below), sorted
  std::vector<Counts> below(static_cast<std::size_t>(bd.tree.num_nodes()));
  int width = 0;
  for (auto it = r.preorder.rbegin(); it != r.preorder.rend(); ++it) {
    const int n = *it;
    Counts& mine = below[static_cast<std::size_t>(n)];
    const int edge = bd.leaf_edge[static_cast<std::size_t>(n)];
    if (edge >= 0) {
      auto [u, v] = g.endpoints(edge);
      mine = {{std::min(u, v), 1}, {std::max(u, v), 1}};
    }
    for (int c : bd.tree.neighbors(n)) {
      if (c == r.parent[static_cast<std::size_t>(n)]) continue;
      Counts& child = below[static_cast<std::size_t>(c)];
      Counts merged;
      merged.reserve(mine.size() + child.size());
      std::size_t i = 0, j = 0;
      while (i < mine.size() || j < child.size()) {
        if (j == child.size() || (i < mine.size() && mine[i].first < child[j].first)) {
          merged.push_back(mine[i++]);
        } else if (i == mine.size() || child[j].first < mine[i].first) {
          merged.push_back(child[j++]);
        } else {
          merged.emplace_back(mine[i].first, mine[i].second + child[j].second);
          ++i, ++j;
        }
      }
      mine = std::move(merged);
      Counts().swap(child);
    }
    if (r.parent[static_cast<std::size_t>(n)] >= 0) {
      int boundary = 0;
      for (auto [v, cnt] : mine) boundary += cnt < g.degree(v) ? 1 : 0;
      width = std::max(width, boundary);
    }
  }
  return width;
}

int width_carving(const Graph& g, const CarvingDecomposition& cd) {
  if (auto v = check_carving_decomposition(g, cd)) fail(ErrorCode::InvalidDecomposition, *v);
  const Rooted r = root_at(cd.tree, 0);
  std::vector<int> leaf_of(static_cast<std::size_t>(g.num_vertices()), -1);
  for (int n = 0; n < cd.tree.num_nodes(); ++n) {
    if (cd.leaf_vertex[static_cast<std::size_t>(n)] >= 0) leaf_of[static_cast<std::size_t>(cd.leaf_vertex[static_cast<std::size_t>(n)])] = n;
  }
  // Each edge crosses exactly the arcs on the tree path between its endpoint
  // leaves: +1 at both leaves, -2 at their lowest common ancestor.
  std::vector<long> mark(static_cast<std::size_t>(cd.tree.num_nodes()), 0);
  for (auto [u, v] : g.edges()) {
    int a = leaf_of[static_cast<std::size_t>(u)];
    int b = leaf_of[static_cast<std::size_t>(v)];
    mark[static_cast<std::size_t>(a)] += 1;
    mark[static_cast<std::size_t>(b)] += 1;
    while (a != b) {
      if (r.depth[static_cast<std::size_t>(a)] >= r.depth[static_cast<std::size_t>(b)]) {
        a = r.parent[static_cast<std::size_t>(a)];
      } else {
        b = r.parent[static_cast<std::size_t>(b)];
      }
    }
    mark[static_cast<std::size_t>(a)] -= 2;
  }
  long width = 0;
  for (auto it = r.preorder.rbegin(); it != r.preorder.rend(); ++it) {
    const int n = *it;
    const int p = r.parent[static_cast<std::size_t>(n)];
    if (p < 0) continue;
    width = std::max(width, mark[static_cast<std::size_t>(n)]);
    mark[static_cast<std::size_t>(p)] += mark[static_cast<std::size_t>(n)];
  }
  return static_cast<int>(width);
}

int width_branch_bruteforce(const Graph& g, const BranchDecomposition& bd) {
  if (auto v = check_branch_decomposition(g, bd)) fail(ErrorCode::InvalidDecomposition, *v);
  int width = 0;
  for (auto [a, b] : bd.tree.arcs()) {
    std::vector<char> side(static_cast<std::size_t>(g.num_edges()), 0);
    for (int n : bd.tree.side_of(a, b)) {
      if (bd.leaf_edge[static_cast<std::size_t>(n)] >= 0) side[static_cast<std::size_t>(bd.leaf_edge[static_cast<std::size_t>(n)])] = 1;
    }
    std::vector<char> in_a(static_cast<std::size_t>(g.num_vertices()), 0), in_b(in_a);
    for (int e = 0; e < g.num_edges(); ++e) {
      auto [u, v] = g.endpoints(e);
      auto& s = side[static_cast<std::size_t>(e)] ? in_a : in_b;
      s[static_cast<std::size_t>(u)] = s[static_cast<std::size_t>(v)] = 1;
    }
    int boundary = 0;
    for (int v = 0; v < g.num_vertices(); ++v) boundary += in_a[static_cast<std::size_t>(v)] && in_b[static_cast<std::size_t>(v)];
    width = std::max(width, boundary);
  }
  return width;
}

int width_carving_bruteforce(const Graph& g, const CarvingDecomposition& cd) {
  if (auto v = check_carving_decomposition(g, cd)) fail(ErrorCode::InvalidDecomposition, *v);
  int width = 0;
  for (auto [a, b] : cd.tree.arcs()) {
    std::vector<char> side(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int n : cd.tree.side_of(a, b)) {
      if (cd.leaf_vertex[static_cast<std::size_t>(n)] >= 0) side[static_cast<std::size_t>(cd.leaf_vertex[static_cast<std::size_t>(n)])] = 1;
    }
    int crossing = 0;
    for (auto [u, v] : g.edges()) crossing += side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)];
    width = std::max(width, crossing);
  }
  return width;
}

TreeDecomposition make_binary(TreeDecomposition td) {
  for (int n = 0; n < td.tree.num_nodes(); ++n) {
    while (td.tree.degree(n) > 3) {
      const int m = td.tree.add_node();
      td.bags.push_back(td.bags[static_cast<std::size_t>(n)]);
      const auto nbrs = td.tree.neighbors(n);
      const int c1 = nbrs[nbrs.size() - 1];
      const int c2 = nbrs[nbrs.size() - 2];
      td.tree.remove_arc(n, c1);
      td.tree.remove_arc(n, c2);
      td.tree.add_arc(m, c1);
      td.tree.add_arc(m, c2);
      td.tree.add_arc(n, m);
    }
  }
  const int original = td.tree.num_nodes();
  for (int n = 0; n < original; ++n) {
    if (td.tree.degree(n) == 2) {
      const int leaf = td.tree.add_node();
      td.bags.push_back(td.bags[static_cast<std::size_t>(n)]);
      td.tree.add_arc(n, leaf);
    }
  }
  return td;
}

LabelledTree normalize_labelled_tree(const Tree& t, const std::vector<int>& label) {
  const auto n0 = static_cast<std::size_t>(t.num_nodes());
  std::vector<std::set<int>> adj(n0);
  std::vector<int> lab = label;
  lab.resize(n0, -1);
  for (auto [a, b] : t.arcs()) {
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  }
  std::vector<char> alive(n0, 1);
  std::vector<int> work;
  for (std::size_t v = 0; v < n0; ++v) work.push_back(static_cast<int>(v));
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    const auto uv = static_cast<std::size_t>(v);
    if (!alive[uv] || lab[uv] >= 0) continue;
    auto& nb = adj[uv];
    if (nb.size() <= 1) {
      // an unlabelled node with at most one neighbour carries nothing
      for (int u : nb) {
        adj[static_cast<std::size_t>(u)].erase(v);
        work.push_back(u);
      }
      nb.clear();
      alive[uv] = 0;
    } else if (nb.size() == 2) {
      const int a = *nb.begin();
      const int b = *std::next(nb.begin());
      adj[static_cast<std::size_t>(a)].erase(v);
      adj[static_cast<std::size_t>(b)].erase(v);
      adj[static_cast<std::size_t>(a)].insert(b);
      adj[static_cast<std::size_t>(b)].insert(a);
      nb.clear();
      alive[uv] = 0;
    }
  }
  // split high degrees
  for (std::size_t v = 0; v < adj.size(); ++v) {
    while (alive[v] && adj[v].size() > 3) {
      const int m = static_cast<int>(adj.size());
      adj.emplace_back();
      alive.push_back(1);
      lab.push_back(-1);
      for (int k = 0; k < 2; ++k) {
        const int c = *adj[v].rbegin();
        adj[v].erase(c);
        adj[static_cast<std::size_t>(c)].erase(static_cast<int>(v));
        adj[static_cast<std::size_t>(c)].insert(m);
        adj[static_cast<std::size_t>(m)].insert(c);
      }
      adj[v].insert(m);
      adj[static_cast<std::size_t>(m)].insert(static_cast<int>(v));
    }
  }
  std::vector<int> renumber(adj.size(), -1);
  LabelledTree out;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!alive[v]) continue;
    renumber[v] = out.tree.add_node();
    out.label.push_back(lab[v]);
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!alive[v]) continue;
    for (int u : adj[v]) {
      if (static_cast<std::size_t>(u) > v) out.tree.add_arc(renumber[v], renumber[static_cast<std::size_t>(u)]);
    }
  }
  return out;
}

}  // namespace tnwmc
