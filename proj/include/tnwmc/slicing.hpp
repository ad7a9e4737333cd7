#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "tnwmc/network.hpp"

namespace tnwmc {

/// N[eta]. Every index bound by eta must be a bond index of n.
TensorNetwork network_slice(const TensorNetwork& n, const Assignment& eta);

/// Peak bytes of live tensors while executing t on the slices of n over
/// `sliced`: leaves count from their first use, intermediates until their
/// parent is formed, 8 bytes per entry.
std::size_t mem_cost(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced);

/// The bond index outside `sliced` whose addition gives the lowest mem_cost;
/// ties go to the smallest id. Throws NoCandidates.
Index choose_slice_index(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced);

/// Greedy growth of the slice set until mem_cost fits `budget`. Throws
/// BudgetInfeasible when slicing every bond index is still too much.
std::vector<Index> choose_slices(const TensorNetwork& n, const ContractionTree& t, std::size_t budget);

struct SlicedResult {
  Tensor value;
  std::vector<Index> sliced;
  std::size_t mem_cost = 0;
  std::size_t slices = 1;
};

/// Sum over eta of execute(N[eta], T[eta]). With jobs > 1 slices run
/// concurrently; partial results are summed in eta order either way, so the
/// value does not depend on jobs.
SlicedResult sliced_execute(const TensorNetwork& n, const ContractionTree& t,
                            std::size_t budget = std::numeric_limits<std::size_t>::max(), int jobs = 1,
                            const Deadline& deadline = Deadline::none());

/// Sums execute over every assignment to `sliced` (which must be bond
/// indices), in enumeration order.
Tensor execute_slices(const TensorNetwork& n, const ContractionTree& t, const std::vector<Index>& sliced, int jobs = 1,
                      const Deadline& deadline = Deadline::none());

}  // namespace tnwmc
