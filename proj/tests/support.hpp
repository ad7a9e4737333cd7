#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tnwmc/formula.hpp"
#include "tnwmc/graph.hpp"
#include "tnwmc/network.hpp"

namespace testsupport {

using namespace tnwmc;

inline CnfFormula example_formula() {
  // w=1, x=2, y=3, z=4
  return CnfFormula(4, {{1, 2, -3}, {1, 3, 4}, {-2, -3}, {-3, -4}});
}

/// (x1 or ... or xn) and (not x1 or ... or not xn)
inline CnfFormula psi(int n) {
  Clause pos, neg;
  for (int i = 1; i <= n; ++i) {
    pos.push_back(i);
    neg.push_back(-i);
  }
  return CnfFormula(n, {pos, neg});
}

inline WeightedFormula random_3cnf(std::mt19937_64& rng, int vars, int clauses, bool random_weights = true) {
  std::uniform_int_distribution<int> pick(1, vars);
  std::bernoulli_distribution sign(0.5);
  std::vector<Clause> cs;
  for (int c = 0; c < clauses; ++c) {
    Clause cl;
    const int width = std::min(3, vars);
    while (static_cast<int>(cl.size()) < width) {
      const int v = pick(rng);
      if (std::any_of(cl.begin(), cl.end(), [&](Literal l) { return var_of(l) == v; })) continue;
      cl.push_back(sign(rng) ? v : -v);
    }
    cs.push_back(cl);
  }
  WeightedFormula wf{CnfFormula(vars, cs), WeightFunction(vars)};
  if (random_weights) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int v = 1; v <= vars; ++v) {
      const double p = u(rng);
      wf.weights.set(v, {1.0 - p, p});
    }
  }
  return wf;
}

/// Up to `max_tensors` tensors of rank <= 3 over indices of domain 2 or 3.
/// Some indices stay free unless `closed`.
inline TensorNetwork random_network(std::mt19937_64& rng, int max_tensors = 6, bool closed = false,
                                    bool integer_values = false) {
  std::uniform_int_distribution<int> count(2, max_tensors);
  const int k = count(rng);
  std::vector<std::vector<Index>> idx(static_cast<std::size_t>(k));
  std::uniform_int_distribution<int> who(0, k - 1);
  std::uniform_int_distribution<int> dom(2, 3);
  std::bernoulli_distribution free_one(closed ? 0.0 : 0.2);
  IndexId next = 1;
  const int attempts = k + 3;
  for (int a = 0; a < attempts; ++a) {
    const int x = who(rng);
    const Index i{next, static_cast<std::size_t>(dom(rng))};
    if (free_one(rng)) {
      if (idx[static_cast<std::size_t>(x)].size() >= 3) continue;
      idx[static_cast<std::size_t>(x)].push_back(i);
      ++next;
      continue;
    }
    int y = who(rng);
    if (y == x) y = (x + 1) % k;
    if (idx[static_cast<std::size_t>(x)].size() >= 3 || idx[static_cast<std::size_t>(y)].size() >= 3) continue;
    idx[static_cast<std::size_t>(x)].push_back(i);
    idx[static_cast<std::size_t>(y)].push_back(i);
    ++next;
  }
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> ival(-3, 3);
  std::vector<Tensor> ts;
  for (auto& ix : idx) {
    std::shuffle(ix.begin(), ix.end(), rng);
    std::vector<double> values(element_count(ix));
    for (auto& v : values) v = integer_values ? ival(rng) : val(rng);
    ts.emplace_back(ix, values);
  }
  return TensorNetwork(ts);
}

/// A uniformly random pairing order over all tensors.
inline ContractionTree random_plan(std::mt19937_64& rng, std::size_t count) {
  ContractionTree t;
  std::vector<int> active;
  for (std::size_t k = 0; k < count; ++k) active.push_back(t.add_leaf(static_cast<int>(k)));
  while (active.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    const std::size_t a = pick(rng);
    std::swap(active[a], active.back());
    const int l = active.back();
    active.pop_back();
    std::uniform_int_distribution<std::size_t> pick2(0, active.size() - 1);
    const std::size_t b = pick2(rng);
    const int r = active[b];
    active[b] = t.add_join(l, r);
  }
  t.set_root(active.front());
  return t;
}

inline Graph random_graph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution edge(p);
  Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (edge(rng)) g.add_edge(u, v);
    }
  }
  if (g.num_edges() == 0 && n >= 2) g.add_edge(0, 1);
  return g;
}

/// Every rooted contraction tree over `count` tensors (count <= 6).
inline std::vector<ContractionTree> all_plans(std::size_t count) {
  std::vector<ContractionTree> out;
  // recursive pairing of a multiset of subtrees, represented by fresh trees
  struct Partial {
    ContractionTree t;
    std::vector<int> active;
  };
  std::vector<Partial> frontier(1);
  for (std::size_t k = 0; k < count; ++k) frontier[0].active.push_back(frontier[0].t.add_leaf(static_cast<int>(k)));
  while (!frontier.empty()) {
    Partial p = std::move(frontier.back());
    frontier.pop_back();
    if (p.active.size() == 1) {
      p.t.set_root(p.active[0]);
      out.push_back(std::move(p.t));
      continue;
    }
    for (std::size_t a = 0; a < p.active.size(); ++a) {
      for (std::size_t b = a + 1; b < p.active.size(); ++b) {
        Partial q = p;
        const int j = q.t.add_join(q.active[a], q.active[b]);
        q.active.erase(q.active.begin() + static_cast<long>(b));
        q.active[a] = j;
        frontier.push_back(std::move(q));
      }
    }
  }
  return out;
}

// Random unrooted binary tree with the given leaf labels.
inline Tree random_binary_tree(std::mt19937_64& rng, std::size_t leaves, std::vector<int>& label,
                        const std::vector<int>& names) {
  Tree t(1);
  label = {names[0]};
  if (leaves == 1) return t;
  const int second = t.add_node();
  t.add_arc(0, second);
  label.push_back(names[1]);
  for (std::size_t k = 2; k < leaves; ++k) {
    const auto arcs = t.arcs();
    std::uniform_int_distribution<std::size_t> pick(0, arcs.size() - 1);
    const auto [a, b] = arcs[pick(rng)];
    t.remove_arc(a, b);
    const int mid = t.add_node();
    const int leaf = t.add_node();
    t.add_arc(a, mid);
    t.add_arc(mid, b);
    t.add_arc(mid, leaf);
    label.push_back(-1);
    label.push_back(names[k]);
  }
  return t;
}

inline BranchDecomposition random_branch(std::mt19937_64& rng, const Graph& g) {
  std::vector<int> names(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) names[static_cast<std::size_t>(e)] = e;
  std::shuffle(names.begin(), names.end(), rng);
  BranchDecomposition bd;
  bd.tree = random_binary_tree(rng, names.size(), bd.leaf_edge, names);
  return bd;
}

inline bool rel_close(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel * scale || a == b;
}

}  // namespace testsupport
