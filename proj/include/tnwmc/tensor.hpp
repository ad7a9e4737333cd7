#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "tnwmc/memory.hpp"

namespace tnwmc {

using IndexId = std::uint64_t;

/// A named tensor dimension. Identity is the id alone; the domain size is a
/// function of the id and is checked for consistency wherever indices meet.
struct Index {
  IndexId id = 0;
  std::size_t domain = 2;

  friend bool operator==(const Index& a, const Index& b) { return a.id == b.id; }
  friend auto operator<=>(const Index& a, const Index& b) { return a.id <=> b.id; }
};

/// Maps a set of indices to values inside their domains.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<Index, std::size_t>> bindings);
  explicit Assignment(std::vector<std::pair<Index, std::size_t>> bindings);

  void bind(Index index, std::size_t value);
  const std::size_t* find(IndexId id) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::vector<std::pair<Index, std::size_t>>& bindings() const { return bindings_; }

  /// Every assignment to `indices`, enumerated with the first index slowest.
  static std::vector<Assignment> enumerate(std::span<const Index> indices);

 private:
  std::vector<std::pair<Index, std::size_t>> bindings_;  // sorted by id
};

using ValueBuffer = std::vector<double, memory::CountingAllocator<double>>;

/// Dense real tensor, row-major with the first listed index varying slowest.
class Tensor {
 public:
  Tensor();  // rank-0 tensor holding 0
  Tensor(std::vector<Index> indices, std::vector<double> values);
  Tensor(std::vector<Index> indices, ValueBuffer values);
  Tensor(std::vector<Index> indices, std::initializer_list<double> values)
      : Tensor(std::move(indices), std::vector<double>(values)) {}

  static Tensor scalar(double value);
  static Tensor zeros(std::vector<Index> indices);

  std::size_t rank() const { return indices_.size(); }
  const std::vector<Index>& indices() const { return indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  std::size_t size() const { return values_.size(); }

  bool has_index(IndexId id) const { return position_of(id) >= 0; }
  /// Position of `id` in indices(), or -1.
  int position_of(IndexId id) const;

  /// Entry addressed by `tau` restricted to this tensor's indices; every
  /// index of the tensor must be bound.
  double at(const Assignment& tau) const;
  double at(std::span<const std::size_t> digits) const;

  /// The same tensor with its index list permuted to `order` (a permutation
  /// of indices()).
  Tensor transposed(const std::vector<Index>& order) const;

 private:
  std::vector<Index> indices_;
  ValueBuffer values_;
};

std::size_t element_count(std::span<const Index> indices);

/// Pairwise contraction: sums over the shared indices, result indices are the
/// kept indices of `a` followed by the kept indices of `b`.
Tensor contract_pair(const Tensor& a, const Tensor& b);

/// Multiply-add count of contract_pair(a, b): the product of the domains of
/// the union of both index sets.
double contraction_ops(std::span<const Index> a, std::span<const Index> b);

/// Entrywise sum; `b` is aligned to the index order of `a`.
Tensor add(const Tensor& a, const Tensor& b);

/// The eta-slice: bindings on indices absent from `a` are ignored.
Tensor slice_tensor(const Tensor& a, const Assignment& eta);

/// True when both tensors have the same index set and all aligned entries
/// agree within `rel_tol` relative to the larger magnitude (and `abs_tol`).
bool approx_equal(const Tensor& a, const Tensor& b, double rel_tol, double abs_tol = 0.0);

}  // namespace tnwmc
