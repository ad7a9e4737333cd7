#include "tnwmc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tnwmc/error.hpp"

namespace tnwmc {

namespace memory {

AllocationStats& thread_stats() {
  thread_local AllocationStats stats;
  return stats;
}

std::size_t reset_peak() {
  auto& s = thread_stats();
  s.peak_bytes = s.live_bytes;
  return s.live_bytes;
}

}  // namespace memory

namespace {

std::vector<std::size_t> strides_of(std::span<const Index> indices) {
  std::vector<std::size_t> strides(indices.size());
  std::size_t stride = 1;
  for (std::size_t k = indices.size(); k-- > 0;) {
    strides[k] = stride;
    stride *= indices[k].domain;
  }
  return strides;
}

// Offsets of every assignment to `subset` (first slowest) into a tensor whose
// strides for those positions are `sub_strides`.
std::vector<std::size_t> offset_table(std::span<const Index> subset, std::span<const std::size_t> sub_strides) {
  std::vector<std::size_t> table{0};
  for (std::size_t k = 0; k < subset.size(); ++k) {
    std::vector<std::size_t> next;
    next.reserve(table.size() * subset[k].domain);
    for (std::size_t base : table) {
      for (std::size_t d = 0; d < subset[k].domain; ++d) next.push_back(base + d * sub_strides[k]);
    }
    table = std::move(next);
  }
  return table;
}

ValueBuffer allocate_values(std::size_t n) {
  try {
    return ValueBuffer(n, 0.0);
  } catch (const std::bad_alloc&) {
    fail(ErrorCode::OutOfMemory, "cannot allocate " + std::to_string(n) + " tensor entries");
  }
}

void check_index_list(const std::vector<Index>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i].domain == 0) fail(ErrorCode::InconsistentDomain, "index with empty domain");
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      if (indices[i].id == indices[j].id) {
        fail(ErrorCode::IndexMismatch, "index " + std::to_string(indices[i].id) + " repeated in one tensor");
      }
    }
  }
}

}  // namespace

std::size_t element_count(std::span<const Index> indices) {
  std::size_t n = 1;
  constexpr std::size_t limit = std::numeric_limits<std::size_t>::max() / sizeof(double);
  for (const auto& index : indices) {
    if (index.domain != 0 && n > limit / index.domain) {
      fail(ErrorCode::OutOfMemory, "tensor of rank " + std::to_string(indices.size()) + " is too large");
    }
    n *= index.domain;
  }
  return n;
}

// ---------------------------------------------------------------- Assignment

Assignment::Assignment(std::initializer_list<std::pair<Index, std::size_t>> bindings) {
  for (const auto& [index, value] : bindings) bind(index, value);
}

Assignment::Assignment(std::vector<std::pair<Index, std::size_t>> bindings) {
  for (const auto& [index, value] : bindings) bind(index, value);
}

void Assignment::bind(Index index, std::size_t value) {
  if (value >= index.domain) {
    fail(ErrorCode::BindingOutOfDomain, "value " + std::to_string(value) + " outside domain of index " +
                                            std::to_string(index.id));
  }
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), index,
                             [](const auto& b, const Index& i) { return b.first.id < i.id; });
  if (it != bindings_.end() && it->first.id == index.id) {
    it->second = value;
  } else {
    bindings_.insert(it, {index, value});
  }
}

const std::size_t* Assignment::find(IndexId id) const {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), id,
                             [](const auto& b, IndexId i) { return b.first.id < i; });
  return it != bindings_.end() && it->first.id == id ? &it->second : nullptr;
}

std::vector<Assignment> Assignment::enumerate(std::span<const Index> indices) {
  std::vector<Assignment> out;
  const std::size_t total = element_count(indices);
  out.reserve(total);
  std::vector<std::size_t> digits(indices.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Assignment a;
    for (std::size_t k = 0; k < indices.size(); ++k) a.bind(indices[k], digits[k]);
    out.push_back(std::move(a));
    for (std::size_t k = indices.size(); k-- > 0;) {
      if (++digits[k] < indices[k].domain) break;
      digits[k] = 0;
    }
  }
  return out;
}

// -------------------------------------------------------------------- Tensor

Tensor::Tensor() : values_(1, 0.0) {}

Tensor::Tensor(std::vector<Index> indices, std::vector<double> values)
    : Tensor(std::move(indices), ValueBuffer(values.begin(), values.end())) {}

Tensor::Tensor(std::vector<Index> indices, ValueBuffer values)
    : indices_(std::move(indices)), values_(std::move(values)) {
  check_index_list(indices_);
  if (values_.size() != element_count(indices_)) {
    fail(ErrorCode::IndexMismatch, "tensor has " + std::to_string(values_.size()) + " values but its indices need " +
                                       std::to_string(element_count(indices_)));
  }
}

Tensor Tensor::scalar(double value) {
  Tensor t;
  t.values_[0] = value;
  return t;
}

Tensor Tensor::zeros(std::vector<Index> indices) {
  check_index_list(indices);
  auto values = allocate_values(element_count(indices));
  return Tensor(std::move(indices), std::move(values));
}

int Tensor::position_of(IndexId id) const {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k].id == id) return static_cast<int>(k);
  }
  return -1;
}

double Tensor::at(const Assignment& tau) const {
  std::size_t offset = 0;
  for (const auto& index : indices_) {
    const std::size_t* v = tau.find(index.id);
    if (v == nullptr) fail(ErrorCode::IndexMismatch, "assignment leaves index " + std::to_string(index.id) + " unbound");
    if (*v >= index.domain) fail(ErrorCode::BindingOutOfDomain, "binding outside domain");
    offset = offset * index.domain + *v;
  }
  return values_[offset];
}

double Tensor::at(std::span<const std::size_t> digits) const {
  if (digits.size() != indices_.size()) fail(ErrorCode::IndexMismatch, "wrong number of coordinates");
  std::size_t offset = 0;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (digits[k] >= indices_[k].domain) fail(ErrorCode::BindingOutOfDomain, "coordinate outside domain");
    offset = offset * indices_[k].domain + digits[k];
  }
  return values_[offset];
}

Tensor Tensor::transposed(const std::vector<Index>& order) const {
  if (order.size() != indices_.size()) fail(ErrorCode::IndexMismatch, "transpose order has wrong rank");
  const auto strides = strides_of(indices_);
  std::vector<std::size_t> permuted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int pos = position_of(order[k].id);
    if (pos < 0) fail(ErrorCode::IndexMismatch, "transpose order names a foreign index");
    permuted[k] = strides[static_cast<std::size_t>(pos)];
  }
  std::vector<Index> new_indices;
  for (const auto& i : order) new_indices.push_back(indices_[static_cast<std::size_t>(position_of(i.id))]);
  const auto table = offset_table(new_indices, permuted);
  auto values = allocate_values(table.size());
  for (std::size_t n = 0; n < table.size(); ++n) values[n] = values_[table[n]];
  return Tensor(std::move(new_indices), std::move(values));
}

// ---------------------------------------------------------------- operations

double contraction_ops(std::span<const Index> a, std::span<const Index> b) {
  double ops = 1.0;
  for (const auto& i : a) ops *= static_cast<double>(i.domain);
  for (const auto& j : b) {
    if (std::find(a.begin(), a.end(), j) == a.end()) ops *= static_cast<double>(j.domain);
  }
  return ops;
}

Tensor contract_pair(const Tensor& a, const Tensor& b) {
  // Matrix view without materialized transposes: rows = kept(a), inner =
  // shared, cols = kept(b). The offset tables play the role of the permuted
  // layouts.
  const auto a_strides = strides_of(a.indices());
  const auto b_strides = strides_of(b.indices());

  std::vector<Index> kept_a, shared, kept_b;
  std::vector<std::size_t> row_strides, inner_a_strides, inner_b_strides, col_strides;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    const Index& i = a.indices()[k];
    const int pb = b.position_of(i.id);
    if (pb < 0) {
      kept_a.push_back(i);
      row_strides.push_back(a_strides[k]);
    } else {
      if (b.indices()[static_cast<std::size_t>(pb)].domain != i.domain) {
        fail(ErrorCode::InconsistentDomain, "index " + std::to_string(i.id) + " has two domain sizes");
      }
      shared.push_back(i);
      inner_a_strides.push_back(a_strides[k]);
      inner_b_strides.push_back(b_strides[static_cast<std::size_t>(pb)]);
    }
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    const Index& j = b.indices()[k];
    if (a.position_of(j.id) < 0) {
      kept_b.push_back(j);
      col_strides.push_back(b_strides[k]);
    }
  }

  const auto rows = offset_table(kept_a, row_strides);
  const auto inner_a = offset_table(shared, inner_a_strides);
  const auto inner_b = offset_table(shared, inner_b_strides);
  const auto cols = offset_table(kept_b, col_strides);

  std::vector<Index> out_indices = kept_a;
  out_indices.insert(out_indices.end(), kept_b.begin(), kept_b.end());
  auto out = allocate_values(element_count(out_indices));

  const auto av = a.values();
  const auto bv = b.values();
  const std::size_t ncols = cols.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double* out_row = out.data() + r * ncols;
    for (std::size_t s = 0; s < inner_a.size(); ++s) {
      const double x = av[rows[r] + inner_a[s]];
      if (x == 0.0) continue;
      const double* b_base = bv.data() + inner_b[s];
      for (std::size_t c = 0; c < ncols; ++c) out_row[c] += x * b_base[cols[c]];
    }
  }
  return Tensor(std::move(out_indices), std::move(out));
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.rank() != b.rank()) fail(ErrorCode::IndexMismatch, "sum of tensors with different index sets");
  for (const auto& i : a.indices()) {
    const int pb = b.position_of(i.id);
    if (pb < 0) fail(ErrorCode::IndexMismatch, "sum of tensors with different index sets");
    if (b.indices()[static_cast<std::size_t>(pb)].domain != i.domain) {
      fail(ErrorCode::InconsistentDomain, "index " + std::to_string(i.id) + " has two domain sizes");
    }
  }
  const Tensor aligned = b.transposed(a.indices());
  auto values = allocate_values(a.size());
  const auto av = a.values();
  const auto bv = aligned.values();
  for (std::size_t n = 0; n < values.size(); ++n) values[n] = av[n] + bv[n];
  return Tensor(a.indices(), std::move(values));
}

Tensor slice_tensor(const Tensor& a, const Assignment& eta) {
  const auto strides = strides_of(a.indices());
  std::size_t base = 0;
  std::vector<Index> kept;
  std::vector<std::size_t> kept_strides;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    const Index& i = a.indices()[k];
    if (const std::size_t* v = eta.find(i.id)) {
      if (*v >= i.domain) {
        fail(ErrorCode::BindingOutOfDomain, "slice binds index " + std::to_string(i.id) + " outside its domain");
      }
      base += *v * strides[k];
    } else {
      kept.push_back(i);
      kept_strides.push_back(strides[k]);
    }
  }
  const auto table = offset_table(kept, kept_strides);
  auto values = allocate_values(table.size());
  const auto av = a.values();
  for (std::size_t n = 0; n < table.size(); ++n) values[n] = av[base + table[n]];
  return Tensor(std::move(kept), std::move(values));
}

bool approx_equal(const Tensor& a, const Tensor& b, double rel_tol, double abs_tol) {
  if (a.rank() != b.rank()) return false;
  for (const auto& i : a.indices()) {
    if (!b.has_index(i.id)) return false;
  }
  const Tensor aligned = b.transposed(a.indices());
  const auto av = a.values();
  const auto bv = aligned.values();
  for (std::size_t n = 0; n < av.size(); ++n) {
    const double diff = std::abs(av[n] - bv[n]);
    const double scale = std::max(std::abs(av[n]), std::abs(bv[n]));
    if (!(diff <= abs_tol || diff <= rel_tol * scale)) return false;
  }
  return true;
}

}  // namespace tnwmc
