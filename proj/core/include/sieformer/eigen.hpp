#pragma once

#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

// Eigendecomposition of a real symmetric matrix. `values[k]` pairs with
// column k of `vectors`; values are sorted ascending and the columns are
// orthonormal.
struct SpectralBasis {
  std::vector<double> values;
  RealMatrix vectors;
};

// Cyclic-by-rows Jacobi rotations. Converges when the off-diagonal
// Frobenius norm falls below `tol`. Input must be square, finite, and
// symmetric to 1e-10 (max |S - S^T|).
SpectralBasis jacobi_eigh(const RealMatrix& s, double tol = 1e-12, int max_sweeps = 100);

}  // namespace sieformer
