#pragma once

#include <cstddef>
#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

// Result of a minimum-cost assignment: row_to_col[i] is the column matched
// to row i, or -1 when rows > cols and row i stays unmatched. Exactly
// min(rows, cols) pairs are assigned.
struct Assignment {
  std::vector<std::ptrdiff_t> row_to_col;
  double total_cost = 0.0;
};

// Hungarian method (potentials + shortest augmenting paths), O(n^2 m).
// Deterministic: ties resolve to the first optimum found in scan order.
Assignment hungarian(const RealMatrix& cost);

}  // namespace sieformer
