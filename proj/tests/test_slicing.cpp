#include <bit>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tnwmc/error.hpp"
#include "tnwmc/factoring.hpp"
#include "tnwmc/heuristics.hpp"
#include "tnwmc/memory.hpp"
#include "tnwmc/reduction.hpp"
#include "tnwmc/slicing.hpp"

using namespace tnwmc;

namespace {

// A(i, j) B(j, k) with i and k free.
TensorNetwork matrix_pair() {
  return TensorNetwork({Tensor({{1, 2}, {2, 2}}, {1, 2, 3, 4}), Tensor({{2, 2}, {3, 2}}, {5, 6, 7, 8})});
}

std::vector<Index> random_subset(std::mt19937_64& rng, const std::vector<Index>& from) {
  std::vector<Index> out;
  std::bernoulli_distribution keep(0.4);
  for (const auto& i : from) {
    if (keep(rng)) out.push_back(i);
  }
  return out;
}

// Reduced formula factored along a min-fill decomposition: a network with a
// plan of small rank.
FactorResult planned(const WeightedFormula& wf) {
  const auto n = reduce(wf.formula, wf.weights);
  const auto sg = structure_graph(n);
  return factor_branch(n, tree_to_branch(min_fill_tree_decomposition(sg.graph, 0), sg.graph));
}

}  // namespace

TEST_CASE("mem_cost examples") {
  const auto n = matrix_pair();
  const auto t = ContractionTree::left_deep(2);
  CHECK(mem_cost(n, t, {}) == 96);
  CHECK(mem_cost(n, t, {{2, 2}}) == 64);
  CHECK(mem_cost(TensorNetwork({Tensor::scalar(4.0)}), ContractionTree::left_deep(1), {}) == 8);
}

TEST_CASE("slice sum equals the full contraction") {
  std::mt19937_64 rng(149);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = testsupport::random_network(rng, 6, trial % 2 == 0, true);
    const auto t = testsupport::random_plan(rng, n.size());
    const Tensor full = execute(n, t);
    const auto sliced = random_subset(rng, n.bond_indices());
    const Tensor sum = execute_slices(n, t, sliced);
    CHECK(approx_equal(sum, full, 0.0));  // integer entries: exact
    // one slice equals executing the sliced network
    if (!sliced.empty()) {
      Assignment eta;
      for (const auto& i : sliced) eta.bind(i, i.domain - 1);
      CHECK(approx_equal(execute(network_slice(n, eta), t), execute(n, t, eta), 0.0));
    }
  }
}

TEST_CASE("slicing more never costs more memory") {
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = testsupport::random_network(rng, 6);
    const auto t = testsupport::random_plan(rng, n.size());
    std::vector<Index> sliced;
    std::size_t last = mem_cost(n, t, sliced);
    for (const auto& j : n.bond_indices()) {
      sliced.push_back(j);
      const std::size_t now = mem_cost(n, t, sliced);
      CHECK(now <= last);
      last = now;
    }
  }
}

TEST_CASE("measured peak stays within mem_cost") {
  std::mt19937_64 rng(157);
  for (int trial = 0; trial < 40; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 6 + trial % 6, 6 + trial % 10);
    const auto fr = planned(wf);
    const auto& n = fr.network;
    const auto& t = fr.plan;
    const auto sliced = random_subset(rng, n.bond_indices());
    Assignment eta;
    for (const auto& i : sliced) eta.bind(i, 1);
    const std::size_t base = memory::reset_peak();
    {
      const Tensor out = execute(n, t, eta);
      (void)out;
    }
    const std::size_t used = memory::thread_stats().peak_bytes - base;
    CHECK(used <= mem_cost(n, t, sliced));
  }
}

TEST_CASE("slice index choice") {
  // A(i:4, j:2) B(i:4, k:2) C(j:2, k:2): slicing the domain-4 index helps most
  const TensorNetwork n({Tensor::zeros({{1, 4}, {2, 2}}), Tensor::zeros({{1, 4}, {3, 2}}), Tensor::zeros({{2, 2}, {3, 2}})});
  const auto t = ContractionTree::left_deep(3);
  CHECK(choose_slice_index(n, t, {}).id == 1);
  // ties go to the smallest id
  const auto pair = matrix_pair();
  const TensorNetwork sym({Tensor::zeros({{1, 2}, {2, 2}}), Tensor::zeros({{1, 2}, {2, 2}})});
  CHECK(choose_slice_index(sym, ContractionTree::left_deep(2), {}).id == 1);
  try {
    choose_slice_index(pair, ContractionTree::left_deep(2), {{2, 2}});
    FAIL("expected NoCandidates");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoCandidates);
  }
}

TEST_CASE("greedy slice sets meet the budget") {
  std::mt19937_64 rng(163);
  for (int trial = 0; trial < 30; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 8, 12);
    const auto fr = planned(wf);
    const auto& n = fr.network;
    const auto& t = fr.plan;
    const std::size_t full = mem_cost(n, t, {});
    const std::size_t floor = mem_cost(n, t, n.bond_indices());
    const std::size_t budget = floor + (full - floor) / 4;
    const auto sliced = choose_slices(n, t, budget);
    CHECK(mem_cost(n, t, sliced) <= budget);
    if (!sliced.empty()) {
      auto shorter = sliced;
      shorter.pop_back();
      CHECK(mem_cost(n, t, shorter) > budget);
    }
    CHECK(choose_slices(n, t, budget) == sliced);
    const auto r = sliced_execute(n, t, budget);
    CHECK(testsupport::rel_close(r.value.values()[0], brute_force_count(wf.formula, wf.weights), 1e-9));
    CHECK(r.slices == element_count(r.sliced));
    CHECK(r.mem_cost <= budget);
  }
}

TEST_CASE("infeasible budget and bad slices") {
  const auto n = matrix_pair();
  const auto t = ContractionTree::left_deep(2);
  try {
    choose_slices(n, t, 16);
    FAIL("expected BudgetInfeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetInfeasible);
  }
  try {
    network_slice(n, Assignment{{{1, 2}, 0}});
    FAIL("expected NotABondIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotABondIndex);
  }
  CHECK_THROWS_AS(execute_slices(n, t, {{3, 2}}), Error);
}

TEST_CASE("parallel slices give bit-identical results") {
  std::mt19937_64 rng(167);
  for (int trial = 0; trial < 10; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 12, 20);
    const auto fr = planned(wf);
    const auto& n = fr.network;
    const auto& t = fr.plan;
    std::vector<Index> sliced(n.bond_indices().begin(), n.bond_indices().begin() + 6);
    const double one = execute_slices(n, t, sliced, 1).values()[0];
    for (int jobs : {2, 4, 8}) {
      CHECK(std::bit_cast<std::uint64_t>(execute_slices(n, t, sliced, jobs).values()[0]) ==
            std::bit_cast<std::uint64_t>(one));
    }
  }
}

TEST_CASE("deadline interrupts sliced execution") {
  std::mt19937_64 rng(173);
  const auto wf = testsupport::random_3cnf(rng, 10, 16);
  const auto fr = planned(wf);
  const auto& n = fr.network;
  const auto& t = fr.plan;
  try {
    execute_slices(n, t, {n.bond_indices().front()}, 2, Deadline::after(std::chrono::seconds(-1)));
    FAIL("expected Timeout");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Timeout);
  }
}
