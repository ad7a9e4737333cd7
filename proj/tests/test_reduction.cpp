#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tnwmc/reduction.hpp"

using namespace tnwmc;
using testsupport::rel_close;

TEST_CASE("four-variable example reduces to 8 tensors and 10 indices") {
  const auto n = reduce(testsupport::example_formula(), WeightFunction(4));
  CHECK(n.size() == 8);
  CHECK(n.bond_indices().size() == 10);
  CHECK(n.free_indices().empty());
  CHECK(execute(n, ContractionTree::left_deep(n.size())).values()[0] == 7.0);
}

TEST_CASE("single unit clause") {
  WeightFunction w(1);
  w.set(1, {0.25, 0.75});
  const auto n = reduce(CnfFormula(1, {{1}}), w);
  REQUIRE(n.size() == 2);
  CHECK(n[0].rank() == 1);
  CHECK(n[0].values()[0] == 0.25);
  CHECK(n[0].values()[1] == 0.75);
  CHECK(n[1].values()[0] == 0.0);
  CHECK(n[1].values()[1] == 1.0);
  CHECK(execute(n, ContractionTree::left_deep(2)).values()[0] == 0.75);
}

TEST_CASE("degenerate formulas") {
  WeightFunction w(2);
  w.set(2, {0.5, 2.0});
  const auto unused = reduce(CnfFormula(2, {{1}}), w);
  CHECK(unused[1].rank() == 0);
  CHECK(unused[1].values()[0] == 2.5);
  CHECK(execute(unused, ContractionTree::left_deep(unused.size())).values()[0] == 2.5);

  const auto empty_clause = reduce(CnfFormula(1, {{}}), WeightFunction(1));
  CHECK(execute(empty_clause, ContractionTree::left_deep(empty_clause.size())).values()[0] == 0.0);

  const auto nothing = reduce(CnfFormula(0, {}), WeightFunction(0));
  CHECK(nothing.size() == 1);
  CHECK(execute(nothing, ContractionTree::left_deep(1)).values()[0] == 1.0);
}

TEST_CASE("clause tensor entries") {
  const Clause c{-1, -2};
  const std::size_t both_true[] = {1, 1};
  const std::size_t both_false[] = {0, 0};
  CHECK(clause_tensor_entry(c, both_true) == 0);
  CHECK(clause_tensor_entry(c, both_false) == 1);

  // every clause of width <= 3 over variables 1..3, every assignment
  for (int width = 1; width <= 3; ++width) {
    for (int signs = 0; signs < (1 << width); ++signs) {
      Clause cl;
      for (int k = 0; k < width; ++k) cl.push_back(((signs >> k) & 1) ? k + 1 : -(k + 1));
      for (int bits = 0; bits < (1 << width); ++bits) {
        std::vector<std::size_t> b;
        bool sat = false;
        for (int k = 0; k < width; ++k) {
          b.push_back(static_cast<std::size_t>((bits >> k) & 1));
          sat = sat || ((b.back() == 1) == (cl[static_cast<std::size_t>(k)] > 0));
        }
        CHECK(clause_tensor_entry(cl, b) == (sat ? 1 : 0));
      }
    }
  }
}

TEST_CASE("reduction tensors have the documented shape") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 8, 10);
    const auto& f = wf.formula;
    const auto n = reduce(f, wf.weights);
    REQUIRE(n.size() == static_cast<std::size_t>(f.num_vars()) + f.clauses().size());
    CHECK(n.free_indices().empty());
    for (int v = 1; v <= f.num_vars(); ++v) {
      const Tensor& a = n[static_cast<std::size_t>(v - 1)];
      if (f.occurrences(v) == 0) continue;
      CHECK(a.rank() == static_cast<std::size_t>(f.occurrences(v)));
      const auto vals = a.values();
      CHECK(vals.front() == wf.weights[v].w0);
      CHECK(vals.back() == wf.weights[v].w1);
      for (std::size_t p = 1; p + 1 < vals.size(); ++p) CHECK(vals[p] == 0.0);
    }
    for (std::size_t c = 0; c < f.clauses().size(); ++c) {
      const Tensor& b = n[static_cast<std::size_t>(f.num_vars()) + c];
      CHECK(b.rank() == f.clauses()[c].size());
      for (const auto& tau : Assignment::enumerate(b.indices())) {
        std::vector<std::size_t> bits;
        for (const auto& i : b.indices()) bits.push_back(*tau.find(i.id));
        CHECK(b.at(tau) == clause_tensor_entry(f.clauses()[c], bits));
      }
    }
    // every index once in an A_x and once in a B_C
    for (const auto& i : n.bond_indices()) {
      int in_vars = 0, in_clauses = 0;
      for (std::size_t k = 0; k < n.size(); ++k) {
        if (n[k].has_index(i.id)) (k < static_cast<std::size_t>(f.num_vars()) ? in_vars : in_clauses)++;
      }
      CHECK(in_vars == 1);
      CHECK(in_clauses == 1);
    }
  }
}

TEST_CASE("structure graph is the incidence graph and ignores weights") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 7, 9);
    const auto sg = structure_graph(reduce(wf.formula, wf.weights));
    const auto sg_unit = structure_graph(reduce(wf.formula, WeightFunction(7)));
    const Graph inc = incidence_graph(wf.formula);
    REQUIRE(sg.graph.num_edges() == inc.num_edges());
    // vertex numbering coincides (variables, then clauses); the free vertex is isolated
    CHECK(sg.graph.edges() == inc.edges());
    CHECK(sg_unit.graph.edges() == sg.graph.edges());
    CHECK(sg.graph.degree(sg.free_vertex) == 0);
  }
}

TEST_CASE("contraction equals the brute-force count") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 3 + trial % 10, 2 + trial % 14);
    const auto n = reduce(wf.formula, wf.weights);
    const double got = execute(n, testsupport::random_plan(rng, n.size())).values()[0];
    CHECK(rel_close(got, brute_force_count(wf.formula, wf.weights), 1e-9));
  }
}

TEST_CASE("primal graph of psi is a clique") {
  const Graph g = primal_graph(testsupport::psi(5));
  CHECK(g.num_edges() == 10);
  CHECK(incidence_graph(testsupport::psi(5)).num_edges() == 10);
}
