#include "tnwmc/reduction.hpp"

#include <algorithm>
#include <set>

namespace tnwmc {

std::vector<Occurrence> occurrences(const CnfFormula& f) {
  std::vector<std::vector<int>> by_var(static_cast<std::size_t>(f.num_vars()) + 1);
  for (std::size_t c = 0; c < f.clauses().size(); ++c) {
    for (Literal lit : f.clauses()[c]) by_var[static_cast<std::size_t>(var_of(lit))].push_back(static_cast<int>(c));
  }
  std::vector<Occurrence> out;
  IndexId next = 1;
  for (int v = 1; v <= f.num_vars(); ++v) {
    for (int c : by_var[static_cast<std::size_t>(v)]) out.push_back({v, c, next++});
  }
  return out;
}

int clause_tensor_entry(const Clause& clause, std::span<const std::size_t> bits) {
  for (std::size_t k = 0; k < clause.size(); ++k) {
    if ((bits[k] == 1) == (clause[k] > 0)) return 1;
  }
  return 0;
}

TensorNetwork reduce(const CnfFormula& f, const WeightFunction& w) {
  const auto occ = occurrences(f);
  const auto n = static_cast<std::size_t>(f.num_vars());
  std::vector<std::vector<Index>> var_indices(n + 1);
  std::vector<std::vector<std::pair<int, Index>>> clause_indices(f.clauses().size());
  for (const auto& o : occ) {
    const Index index{o.id, 2};
    var_indices[static_cast<std::size_t>(o.var)].push_back(index);
    clause_indices[static_cast<std::size_t>(o.clause)].push_back({o.var, index});
  }

  std::vector<Tensor> tensors;
  tensors.reserve(n + f.clauses().size() + 1);
  for (std::size_t v = 1; v <= n; ++v) {
    const auto& weight = w[static_cast<int>(v)];
    auto& idx = var_indices[v];
    if (idx.empty()) {
      tensors.push_back(Tensor::scalar(weight.w0 + weight.w1));
      continue;
    }
    Tensor a = Tensor::zeros(idx);
    auto values = a.mutable_values();
    values.front() = weight.w0;
    values.back() = weight.w1;
    tensors.push_back(std::move(a));
  }

  for (std::size_t c = 0; c < f.clauses().size(); ++c) {
    const Clause& clause = f.clauses()[c];
    // clause_indices is in variable order; the tensor follows literal order
    std::vector<Index> idx;
    for (Literal lit : clause) {
      auto it = std::find_if(clause_indices[c].begin(), clause_indices[c].end(),
                             [&](const auto& p) { return p.first == var_of(lit); });
      idx.push_back(it->second);
    }
    if (idx.empty()) {
      tensors.push_back(Tensor::scalar(0.0));
      continue;
    }
    // every assignment satisfies except the one with each literal false
    std::vector<double> values(element_count(idx), 1.0);
    std::size_t falsifying = 0;
    for (Literal lit : clause) falsifying = falsifying * 2 + (lit > 0 ? 0 : 1);
    values[falsifying] = 0.0;
    tensors.emplace_back(std::move(idx), std::move(values));
  }

  if (tensors.empty()) tensors.push_back(Tensor::scalar(1.0));
  return TensorNetwork(std::move(tensors));
}

Graph incidence_graph(const CnfFormula& f) {
  Graph g(f.num_vars() + static_cast<int>(f.clauses().size()));
  for (const auto& o : occurrences(f)) g.add_edge(o.var - 1, f.num_vars() + o.clause);
  return g;
}

Graph primal_graph(const CnfFormula& f) {
  std::set<std::pair<int, int>> pairs;
  for (const auto& clause : f.clauses()) {
    for (std::size_t a = 0; a < clause.size(); ++a) {
      for (std::size_t b = a + 1; b < clause.size(); ++b) {
        int u = var_of(clause[a]) - 1;
        int v = var_of(clause[b]) - 1;
        if (u > v) std::swap(u, v);
        pairs.insert({u, v});
      }
    }
  }
  return Graph(f.num_vars(), {pairs.begin(), pairs.end()});
}

}  // namespace tnwmc
