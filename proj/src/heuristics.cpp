#include "tnwmc/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "tnwmc/error.hpp"

namespace tnwmc {

namespace {

bool adjacent(const std::vector<int>& sorted_nbrs, int v) {
  return std::binary_search(sorted_nbrs.begin(), sorted_nbrs.end(), v);
}

long fill_of(const std::vector<std::vector<int>>& adj, int v) {
  const auto& nb = adj[static_cast<std::size_t>(v)];
  long missing = 0;
  for (std::size_t a = 0; a < nb.size(); ++a) {
    for (std::size_t b = a + 1; b < nb.size(); ++b) {
      if (!adjacent(adj[static_cast<std::size_t>(nb[a])], nb[b])) ++missing;
    }
  }
  return missing;
}

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void erase_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

std::vector<int> elimination_order(const Graph& g, EliminationHeuristic h, std::uint64_t seed) {
  const int n = g.num_vertices();
  auto adj = g.simple_adjacency();
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  std::vector<std::uint64_t> key(static_cast<std::size_t>(n));
  std::mt19937_64 rng(seed);
  for (auto& k : key) k = rng();

  std::vector<long> score(static_cast<std::size_t>(n));
  auto rescore = [&](int v) {
    score[static_cast<std::size_t>(v)] = h == EliminationHeuristic::MinFill
                                             ? fill_of(adj, v)
                                             : static_cast<long>(adj[static_cast<std::size_t>(v)].size());
  };
  for (int v = 0; v < n; ++v) rescore(v);

  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<int> stamp(static_cast<std::size_t>(n), -1);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      if (best < 0) {
        best = v;
        continue;
      }
      const auto sv = score[static_cast<std::size_t>(v)];
      const auto sb = score[static_cast<std::size_t>(best)];
      const auto dv = adj[static_cast<std::size_t>(v)].size();
      const auto db = adj[static_cast<std::size_t>(best)].size();
      if (std::tie(sv, dv, key[static_cast<std::size_t>(v)]) < std::tie(sb, db, key[static_cast<std::size_t>(best)])) {
        best = v;
      }
    }
    order.push_back(best);
    gone[static_cast<std::size_t>(best)] = 1;
    const auto nb = adj[static_cast<std::size_t>(best)];
    for (int u : nb) erase_sorted(adj[static_cast<std::size_t>(u)], best);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        insert_sorted(adj[static_cast<std::size_t>(nb[a])], nb[b]);
        insert_sorted(adj[static_cast<std::size_t>(nb[b])], nb[a]);
      }
    }
    adj[static_cast<std::size_t>(best)].clear();
    // scores can only change within distance two of the eliminated vertex
    for (int u : nb) {
      if (stamp[static_cast<std::size_t>(u)] != step) {
        stamp[static_cast<std::size_t>(u)] = step;
        rescore(u);
      }
      if (h != EliminationHeuristic::MinFill) continue;
      for (int x : adj[static_cast<std::size_t>(u)]) {
        if (stamp[static_cast<std::size_t>(x)] != step) {
          stamp[static_cast<std::size_t>(x)] = step;
          rescore(x);
        }
      }
    }
  }
  return order;
}

TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<int>& order) {
  const int n = g.num_vertices();
  TreeDecomposition td;
  if (n == 0) {
    td.tree = Tree(1);
    td.bags.assign(1, {});
    return td;
  }
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
  auto adj = g.simple_adjacency();
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  // node k of the tree is the bag of order[k]
  td.tree = Tree(n);
  td.bags.resize(static_cast<std::size_t>(n));
  int previous_root = -1;
  for (int k = 0; k < n; ++k) {
    const int v = order[static_cast<std::size_t>(k)];
    std::vector<int> later;
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (pos[static_cast<std::size_t>(u)] > k) later.push_back(u);
    }
    for (std::size_t a = 0; a < later.size(); ++a) {
      for (std::size_t b = a + 1; b < later.size(); ++b) {
        insert_sorted(adj[static_cast<std::size_t>(later[a])], later[b]);
        insert_sorted(adj[static_cast<std::size_t>(later[b])], later[a]);
      }
    }
    auto& bag = td.bags[static_cast<std::size_t>(k)];
    bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    if (later.empty()) {
      // root of a component; chain component roots together
      if (previous_root >= 0) td.tree.add_arc(previous_root, k);
      previous_root = k;
      continue;
    }
    int parent = n;
    for (int u : later) parent = std::min(parent, pos[static_cast<std::size_t>(u)]);
    td.tree.add_arc(k, parent);
  }
  return make_binary(std::move(td));
}

TreeDecomposition min_fill_tree_decomposition(const Graph& g, std::uint64_t seed) {
  return decomposition_from_order(g, elimination_order(g, EliminationHeuristic::MinFill, seed));
}

TreeDecomposition min_degree_tree_decomposition(const Graph& g, std::uint64_t seed) {
  return decomposition_from_order(g, elimination_order(g, EliminationHeuristic::MinDegree, seed));
}

BranchDecomposition tree_to_branch(const TreeDecomposition& td, const Graph& g) {
  if (g.num_edges() == 0) fail(ErrorCode::InvalidGraph, "branch decompositions need at least one edge");
  Tree t = td.tree;
  std::vector<int> label(static_cast<std::size_t>(t.num_nodes()), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.endpoints(e);
    int host = -1;
    for (int node = 0; node < t.num_nodes() && node < static_cast<int>(td.bags.size()); ++node) {
      const auto& bag = td.bags[static_cast<std::size_t>(node)];
      if (std::binary_search(bag.begin(), bag.end(), u) && std::binary_search(bag.begin(), bag.end(), v)) {
        host = node;
        break;
      }
    }
    if (host < 0) fail(ErrorCode::NoHostBag, "no bag holds both endpoints of edge " + std::to_string(e));
    const int leaf = t.add_node();
    label.push_back(e);
    t.add_arc(host, leaf);
  }
  auto norm = normalize_labelled_tree(t, label);
  return {std::move(norm.tree), std::move(norm.label)};
}

BranchDecomposition caterpillar_branch_decomposition(const Graph& g, const std::vector<int>& edge_order) {
  const auto m = edge_order.size();
  if (m == 0 || static_cast<int>(m) != g.num_edges()) {
    fail(ErrorCode::InvalidGraph, "caterpillar needs every edge of a nonempty graph");
  }
  BranchDecomposition bd;
  auto leaf = [&](int e) {
    bd.leaf_edge.push_back(e);
    return bd.tree.add_node();
  };
  if (m == 1) {
    leaf(edge_order[0]);
    return bd;
  }
  if (m == 2) {
    const int a = leaf(edge_order[0]);
    const int b = leaf(edge_order[1]);
    bd.tree.add_arc(a, b);
    return bd;
  }
  int spine = -1;
  for (std::size_t k = 0; k + 2 < m; ++k) {
    const int s = bd.tree.add_node();
    bd.leaf_edge.push_back(-1);
    if (spine < 0) {
      bd.tree.add_arc(s, leaf(edge_order[0]));
    } else {
      bd.tree.add_arc(s, spine);
    }
    bd.tree.add_arc(s, leaf(edge_order[k + 1]));
    spine = s;
  }
  bd.tree.add_arc(spine, leaf(edge_order[m - 1]));
  return bd;
}

}  // namespace tnwmc
