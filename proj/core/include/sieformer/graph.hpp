#pragma once

#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

// Token-affinity graph derived from query/key projections.
//  raw            scaled scores Q K^T / scale
//  rectified      ReLU((raw + raw^T) / 2), symmetric and non-negative
//  degrees        row sums of `rectified` plus epsilon, all positive
//  adjacency_norm D^{-1/2} rectified D^{-1/2}
//  laplacian      I - adjacency_norm; its spectrum lies in [0, 2]
struct AffinityKernel {
  RealMatrix raw;
  RealMatrix rectified;
  std::vector<double> degrees;
  RealMatrix adjacency_norm;
  RealMatrix laplacian;
  double epsilon = 0.0;
};

// Degree regularizer guarding isolated tokens (rows rectified to zero).
inline constexpr double kDegreeEpsilon = 1e-8;

// Scaled affinity scores Q K^T / scale. Q and K must share the shape
// N x C_e; scale must be positive and finite.
RealMatrix build_affinity(const RealMatrix& q, const RealMatrix& k, double scale);

// Full kernel from raw scores. `epsilon` must keep every degree positive;
// with epsilon = 0 a fully rectified-away row is rejected.
AffinityKernel build_kernel(const RealMatrix& m, double epsilon = kDegreeEpsilon);

}  // namespace sieformer
