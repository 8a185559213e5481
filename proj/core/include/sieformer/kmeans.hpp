#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

struct KMeansResult {
  std::vector<std::size_t> assignments;  // cluster id per feature row
  RealMatrix centroids;                  // num_clusters x dim
  double inertia = 0.0;                  // sum of squared distances to assigned centroid
  std::size_t iterations = 0;
  bool converged = false;  // reached an assignment fixed point before max_iters
};

// Constrained Lloyd iteration. `labels[i]` is a class id in [0, L) for
// anchored rows or -1 for free rows. Cluster c < L is pinned to class c:
// labeled rows never leave it and it is seeded from the labeled class mean.
// The remaining clusters are seeded by D^2 sampling against the anchored
// centroids. A cluster emptied during an update is re-seeded from the point
// farthest from its current centroid. Deterministic under `seed`.
KMeansResult semi_supervised_kmeans(const RealMatrix& features,
                                    const std::vector<int>& labels,
                                    std::size_t num_clusters, std::size_t max_iters,
                                    std::uint64_t seed);

}  // namespace sieformer
