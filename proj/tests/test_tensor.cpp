#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tnwmc/error.hpp"
#include "tnwmc/tensor.hpp"

using namespace tnwmc;

namespace {

const Index I{1, 2}, J{2, 2}, K{3, 2};

// Direct sum over assignments of the shared indices.
Tensor naive_contract(const Tensor& a, const Tensor& b) {
  std::vector<Index> out, shared;
  for (const auto& i : a.indices()) (b.has_index(i.id) ? shared : out).push_back(i);
  for (const auto& j : b.indices()) {
    if (!a.has_index(j.id)) out.push_back(j);
  }
  Tensor r = Tensor::zeros(out);
  const auto outs = Assignment::enumerate(out);
  for (std::size_t p = 0; p < outs.size(); ++p) {
    double sum = 0;
    for (const auto& s : Assignment::enumerate(shared)) {
      Assignment full = outs[p];
      for (const auto& [idx, v] : s.bindings()) full.bind(idx, v);
      sum += a.at(full) * b.at(full);
    }
    r.mutable_values()[p] = sum;
  }
  return r;
}

Tensor random_tensor(std::mt19937_64& rng, std::vector<Index> idx) {
  std::uniform_int_distribution<int> d(-4, 4);
  std::vector<double> v(element_count(idx));
  for (auto& x : v) x = d(rng);
  return Tensor(std::move(idx), std::move(v));
}

}  // namespace

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(Tensor({I, I}, std::vector<double>(4)), Error);
  CHECK_THROWS_AS(Tensor({I, J}, std::vector<double>(3)), Error);
  CHECK(Tensor().rank() == 0);
  CHECK(Tensor::scalar(2.5).values()[0] == 2.5);
}

TEST_CASE("matrix product") {
  const Tensor a({I, K}, {1, 2, 3, 4});
  const Tensor b({K, J}, {5, 6, 7, 8});
  const Tensor c = contract_pair(a, b);
  REQUIRE(c.indices() == std::vector<Index>{I, J});
  CHECK(std::vector<double>(c.values().begin(), c.values().end()) == std::vector<double>{19, 22, 43, 50});
}

TEST_CASE("dot product and outer product") {
  const Tensor a({I}, {2, 3});
  const Tensor b({I}, {4, 5});
  const Tensor d = contract_pair(a, b);
  CHECK(d.rank() == 0);
  CHECK(d.values()[0] == 23);

  std::mt19937_64 rng(3);
  const Tensor x = random_tensor(rng, {I, J});
  const Tensor y = random_tensor(rng, {K, Index{4, 2}});
  CHECK(approx_equal(contract_pair(x, y), naive_contract(x, y), 0.0));
}

TEST_CASE("contract agrees with the naive sum on every small shape") {
  std::mt19937_64 rng(17);
  std::vector<Index> pool{{1, 2}, {2, 3}, {3, 1}, {4, 3}, {5, 2}};
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<Index> ia, ib;
    for (const auto& i : pool) {
      const int where = static_cast<int>(rng() % 4);
      if ((where == 1 || where == 3) && ia.size() < 3) ia.push_back(i);
      if ((where == 2 || where == 3) && ib.size() < 3) ib.push_back(i);
    }
    std::shuffle(ia.begin(), ia.end(), rng);
    std::shuffle(ib.begin(), ib.end(), rng);
    const Tensor a = random_tensor(rng, ia);
    const Tensor b = random_tensor(rng, ib);
    const Tensor c = contract_pair(a, b);
    CHECK(approx_equal(c, naive_contract(a, b), 0.0));
    CHECK(approx_equal(c, contract_pair(b, a), 0.0));
    CHECK(contraction_ops(a.indices(), b.indices()) > 0);
  }
}

TEST_CASE("permuting the layout does not change results") {
  std::mt19937_64 rng(4);
  const Tensor a = random_tensor(rng, {Index{1, 2}, Index{2, 3}, Index{3, 2}});
  const Tensor b = random_tensor(rng, {Index{3, 2}, Index{4, 3}});
  const Tensor at = a.transposed({Index{3, 2}, Index{1, 2}, Index{2, 3}});
  CHECK(approx_equal(contract_pair(a, b), contract_pair(at, b), 0.0));
  CHECK(approx_equal(a, at, 0.0));
}

TEST_CASE("add") {
  const Tensor a({I, J}, {1, 0, 0, 1});
  const Tensor b({I, J}, {0, 1, 1, 0});
  const Tensor s = add(a, b);
  CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{1, 1, 1, 1});
  const Tensor c({J, I}, {1, 2, 3, 4});
  CHECK(approx_equal(add(a, c), add(c, a), 0.0));
  CHECK(add(a, c).at(Assignment{{I, 0}, {J, 1}}) == 3);
  CHECK(add(Tensor::scalar(2.5), Tensor::scalar(0.5)).values()[0] == 3.0);
  CHECK_THROWS_AS(add(a, Tensor({I}, {1, 2})), Error);
}

TEST_CASE("slice") {
  const Tensor a({I, J}, {1, 2, 3, 4});
  const Tensor row = slice_tensor(a, Assignment{{I, 1}});
  CHECK(row.indices() == std::vector<Index>{J});
  CHECK(row.values()[0] == 3);
  CHECK(row.values()[1] == 4);
  CHECK(approx_equal(slice_tensor(a, {}), a, 0.0));
  CHECK(slice_tensor(a, Assignment{{K, 1}}).rank() == 2);
  CHECK_THROWS_AS(slice_tensor(a, Assignment{{Index{1, 2}, 5}}), Error);
}

TEST_CASE("full slices visit every entry once and restacking inverts slicing") {
  std::mt19937_64 rng(9);
  const std::vector<Index> idx{Index{1, 2}, Index{2, 3}, Index{3, 2}};
  const Tensor a = random_tensor(rng, idx);
  double total = 0;
  for (const auto& eta : Assignment::enumerate(idx)) {
    const Tensor s = slice_tensor(a, eta);
    CHECK(s.rank() == 0);
    CHECK(s.values()[0] == a.at(eta));
    total += s.values()[0];
  }
  double direct = 0;
  for (double x : a.values()) direct += x;
  CHECK(total == direct);

  // stack the slices over index 2 back into place
  const std::vector<Index> sub{Index{2, 3}};
  Tensor rebuilt = Tensor::zeros(idx);
  for (const auto& eta : Assignment::enumerate(sub)) {
    const Tensor s = slice_tensor(a, eta);
    for (const auto& rest : Assignment::enumerate(s.indices())) {
      Assignment full = rest;
      for (const auto& [i, v] : eta.bindings()) full.bind(i, v);
      std::vector<std::size_t> digits;
      for (const auto& i : idx) digits.push_back(*full.find(i.id));
      std::size_t pos = 0;
      for (std::size_t k = 0; k < idx.size(); ++k) pos = pos * idx[k].domain + digits[k];
      rebuilt.mutable_values()[pos] = s.at(rest);
    }
  }
  CHECK(approx_equal(rebuilt, a, 0.0));
}

TEST_CASE("counting allocator tracks value buffers") {
  const std::size_t base = memory::reset_peak();
  {
    Tensor t = Tensor::zeros({Index{1, 4}, Index{2, 4}});
    CHECK(memory::thread_stats().live_bytes == base + 16 * sizeof(double));
  }
  CHECK(memory::thread_stats().live_bytes == base);
  CHECK(memory::thread_stats().peak_bytes == base + 16 * sizeof(double));
}
