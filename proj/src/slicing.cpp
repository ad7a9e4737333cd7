#include "tnwmc/slicing.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "tnwmc/error.hpp"

namespace tnwmc {

namespace {

void require_bonds(const TensorNetwork& n, const std::vector<Index>& indices) {
  for (const auto& i : indices) {
    if (!n.is_bond(i.id)) fail(ErrorCode::NotABondIndex, "index " + std::to_string(i.id) + " is not a bond index");
  }
}

std::vector<Index> minus(const std::vector<Index>& a, const std::vector<Index>& sliced) {
  std::vector<Index> out;
  for (const auto& i : a) {
    if (std::find(sliced.begin(), sliced.end(), i) == sliced.end()) out.push_back(i);
  }
  return out;
}

}  // namespace

TensorNetwork network_slice(const TensorNetwork& n, const Assignment& eta) {
  std::vector<Index> bound;
  for (const auto& [i, value] : eta.bindings()) bound.push_back(i);
  require_bonds(n, bound);
  std::vector<Tensor> out;
  out.reserve(n.size());
  for (const auto& a : n.tensors()) out.push_back(slice_tensor(a, eta));
  return TensorNetwork(std::move(out));
}

std::size_t mem_cost(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced) {
  check_plan(n, t);
  std::vector<std::vector<Index>> idx(t.nodes().size());
  std::vector<std::size_t> size(t.nodes().size(), 0);
  std::size_t live = 0, peak = 0;
  for (int id : t.postorder()) {
    const auto uid = static_cast<std::size_t>(id);
    const auto& nd = t.node(id);
    if (nd.is_leaf()) {
      idx[uid] = minus(n[static_cast<std::size_t>(nd.tensor)].indices(), sliced);
    } else {
      const auto& l = idx[static_cast<std::size_t>(nd.left)];
      const auto& r = idx[static_cast<std::size_t>(nd.right)];
      for (const auto& i : l) {
        if (std::find(r.begin(), r.end(), i) == r.end()) idx[uid].push_back(i);
      }
      for (const auto& j : r) {
        if (std::find(l.begin(), l.end(), j) == l.end()) idx[uid].push_back(j);
      }
    }
    size[uid] = element_count(idx[uid]);
    live += size[uid];
    peak = std::max(peak, live);
    if (!nd.is_leaf()) {
      live -= size[static_cast<std::size_t>(nd.left)] + size[static_cast<std::size_t>(nd.right)];
      idx[static_cast<std::size_t>(nd.left)].clear();
      idx[static_cast<std::size_t>(nd.right)].clear();
    }
  }
  return peak * sizeof(double);
}

Index choose_slice_index(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced) {
  std::optional<Index> best;
  std::size_t best_cost = 0;
  auto with = sliced;
  for (const auto& j : n.bond_indices()) {  // ascending id, so ties keep the smallest
    if (std::find(sliced.begin(), sliced.end(), j) != sliced.end()) continue;
    with.push_back(j);
    const std::size_t cost = mem_cost(n, t, with);
    with.pop_back();
    if (!best || cost < best_cost) {
      best = j;
      best_cost = cost;
    }
  }
  if (!best) fail(ErrorCode::NoCandidates, "every bond index is already sliced");
  return *best;
}

std::vector<Index> choose_slices(const TensorNetwork& n, const ContractionTree& t, std::size_t budget) {
  std::vector<Index> sliced;
  while (mem_cost(n, t, sliced) > budget) {
    if (sliced.size() == n.bond_indices().size()) {
      fail(ErrorCode::BudgetInfeasible, "memory budget of " + std::to_string(budget) +
                                            " bytes cannot be met even with every bond index sliced");
    }
    sliced.push_back(choose_slice_index(n, t, sliced));
  }
  return sliced;
}

Tensor execute_slices(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced, int jobs,
                      const Deadline& deadline) {
  require_bonds(n, sliced);
  const auto etas = Assignment::enumerate(sliced);
  std::vector<std::optional<Tensor>> parts(etas.size());
  if (jobs <= 1 || etas.size() <= 1) {
    std::optional<Tensor> sum;
    for (const auto& eta : etas) {
      Tensor part = execute(n, t, eta, deadline);
      sum = sum ? add(*sum, part) : std::move(part);
    }
    return std::move(*sum);
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  {
    std::vector<std::jthread> workers;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(jobs), etas.size());
    for (std::size_t w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < etas.size();) {
          try {
            parts[k] = execute(n, t, etas[k], deadline);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
            next = etas.size();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  Tensor sum = std::move(*parts[0]);
  for (std::size_t k = 1; k < parts.size(); ++k) sum = add(sum, *parts[k]);
  return sum;
}

SlicedResult sliced_execute(const TensorNetwork& n, const ContractionTree& t, std::size_t budget, int jobs,
                            const Deadline& deadline) {
  check_plan(n, t);
  SlicedResult r;
  r.sliced = choose_slices(n, t, budget);
  r.mem_cost = mem_cost(n, t, r.sliced);
  r.slices = element_count(r.sliced);
  r.value = execute_slices(n, t, r.sliced, jobs, deadline);
  return r;
}

}  // namespace tnwmc
