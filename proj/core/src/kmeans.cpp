#include "sieformer/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sieformer/error.hpp"
#include "sieformer/rng.hpp"

namespace sieformer {

namespace {

double sq_distance(const RealMatrix& rows, std::size_t i, const RealMatrix& centroids,
                   std::size_t c) {
  double sq = 0.0;
  for (std::size_t k = 0; k < rows.cols(); ++k) {
    double d = rows(i, k) - centroids(c, k);
    sq += d * d;
  }
  return sq;
}

std::size_t nearest_centroid(const RealMatrix& rows, std::size_t i,
                             const RealMatrix& centroids) {
  std::size_t best = 0;
  double best_sq = sq_distance(rows, i, centroids, 0);
  for (std::size_t c = 1; c < centroids.rows(); ++c) {
    double sq = sq_distance(rows, i, centroids, c);
    if (sq < best_sq) {
      best_sq = sq;
      best = c;
    }
  }
  return best;
}

}  // namespace

KMeansResult semi_supervised_kmeans(const RealMatrix& features,
                                    const std::vector<int>& labels,
                                    std::size_t num_clusters, std::size_t max_iters,
                                    std::uint64_t seed) {
  std::size_t n = features.rows();
  std::size_t dim = features.cols();
  if (n == 0 || dim == 0) {
    throw DimensionError("semi_supervised_kmeans: features are empty");
  }
  if (!all_finite(features)) {
    throw NumericError("semi_supervised_kmeans: non-finite feature");
  }
  if (labels.size() != n) {
    throw DimensionError("semi_supervised_kmeans: one label per row required");
  }
  if (max_iters == 0) {
    throw ParameterError("semi_supervised_kmeans: max_iters must be >= 1");
  }

  // Anchored clusters are 0..anchored-1; their class ids must be dense so
  // cluster id == class id.
  int max_label = -1;
  for (int label : labels) max_label = std::max(max_label, label);
  std::size_t anchored = static_cast<std::size_t>(max_label + 1);
  std::vector<std::size_t> class_counts(anchored, 0);
  for (int label : labels) {
    if (label >= 0) ++class_counts[static_cast<std::size_t>(label)];
  }
  for (std::size_t c = 0; c < anchored; ++c) {
    if (class_counts[c] == 0) {
      throw ParameterError(
          "semi_supervised_kmeans: anchored class ids must be dense 0..L-1");
    }
  }
  if (num_clusters < std::max<std::size_t>(anchored, 1)) {
    throw ParameterError("semi_supervised_kmeans: need at least one cluster per "
                         "labeled class");
  }
  if (num_clusters > n) {
    throw ParameterError("semi_supervised_kmeans: more clusters than points");
  }

  RealMatrix centroids(num_clusters, dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0) continue;
    auto c = static_cast<std::size_t>(labels[i]);
    for (std::size_t k = 0; k < dim; ++k) centroids(c, k) += features(i, k);
  }
  for (std::size_t c = 0; c < anchored; ++c) {
    double inv = 1.0 / static_cast<double>(class_counts[c]);
    for (std::size_t k = 0; k < dim; ++k) centroids(c, k) *= inv;
  }

  // Free clusters: D^2 sampling against whatever centroids exist so far.
  Rng rng = Rng(seed).stream(0x6b6d65616e73ULL);
  for (std::size_t c = anchored; c < num_clusters; ++c) {
    std::size_t pick;
    if (c == 0) {
      pick = rng.uniform_int(n);
    } else {
      std::vector<double> weight(n);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < c; ++e) {
          best = std::min(best, sq_distance(features, i, centroids, e));
        }
        weight[i] = best;
        total += best;
      }
      if (total > 0.0) {
        double u = rng.uniform() * total;
        pick = n - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += weight[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
      } else {
        pick = rng.uniform_int(n);  // all points coincide with a centroid
      }
    }
    for (std::size_t k = 0; k < dim; ++k) centroids(c, k) = features(pick, k);
  }

  auto assign_all = [&](std::vector<std::size_t>& out) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = labels[i] >= 0 ? static_cast<std::size_t>(labels[i])
                              : nearest_centroid(features, i, centroids);
    }
  };

  KMeansResult result;
  assign_all(result.assignments);

  std::vector<std::size_t> next(n);
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    // Constrained means.
    std::vector<std::size_t> counts(num_clusters, 0);
    RealMatrix sums(num_clusters, dim);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = result.assignments[i];
      ++counts[c];
      for (std::size_t k = 0; k < dim; ++k) sums(c, k) += features(i, k);
    }
    for (std::size_t c = 0; c < num_clusters; ++c) {
      if (counts[c] == 0) continue;
      double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t k = 0; k < dim; ++k) centroids(c, k) = sums(c, k) * inv;
    }
    // Documented fallback: an emptied cluster jumps to the free point
    // farthest from its assigned centroid.
    for (std::size_t c = 0; c < num_clusters; ++c) {
      if (counts[c] != 0) continue;
      double worst = -1.0;
      std::ptrdiff_t pick = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] >= 0) continue;
        double sq = sq_distance(features, i, centroids, result.assignments[i]);
        if (sq > worst) {
          worst = sq;
          pick = static_cast<std::ptrdiff_t>(i);
        }
      }
      if (pick < 0) continue;  // every point anchored; cluster stays empty
      for (std::size_t k = 0; k < dim; ++k) {
        centroids(c, k) = features(static_cast<std::size_t>(pick), k);
      }
    }

    assign_all(next);
    result.iterations = iter;
    if (next == result.assignments) {
      result.converged = true;
      break;
    }
    result.assignments.swap(next);
  }

  result.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.inertia += sq_distance(features, i, centroids, result.assignments[i]);
  }
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace sieformer
