#include "sieformer/graph.hpp"

#include <cmath>

#include "sieformer/error.hpp"

namespace sieformer {

RealMatrix build_affinity(const RealMatrix& q, const RealMatrix& k, double scale) {
  if (!q.same_shape(k) || q.empty())
    throw DimensionError("build_affinity: Q and K must share a non-empty shape");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParameterError("build_affinity: scale must be positive and finite");
  if (!all_finite(q) || !all_finite(k))
    throw NumericError("build_affinity: non-finite input");

  RealMatrix m = matmul(q, transpose(k));
  const double inv = 1.0 / scale;
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] *= inv;
  return m;
}

AffinityKernel build_kernel(const RealMatrix& m, double epsilon) {
  if (m.rows() != m.cols() || m.empty())
    throw DimensionError("build_kernel: affinity matrix must be square");
  if (epsilon < 0.0 || !std::isfinite(epsilon))
    throw ParameterError("build_kernel: epsilon must be non-negative");
  if (!all_finite(m)) throw NumericError("build_kernel: non-finite affinity");

  const std::size_t n = m.rows();
  AffinityKernel kernel;
  kernel.raw = m;
  kernel.epsilon = epsilon;

  // Symmetrize first, rectify second: order matters for mixed-sign pairs.
  kernel.rectified = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      kernel.rectified(i, j) = s > 0.0 ? s : 0.0;
    }

  kernel.degrees.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = epsilon;
    for (std::size_t j = 0; j < n; ++j) d += kernel.rectified(i, j);
    if (!(d > 0.0))
      throw NumericError("build_kernel: non-positive degree (isolated token, epsilon = 0)");
    kernel.degrees[i] = d;
  }

  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(kernel.degrees[i]);

  kernel.adjacency_norm = RealMatrix(n, n);
  kernel.laplacian = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = inv_sqrt[i] * kernel.rectified(i, j) * inv_sqrt[j];
      kernel.adjacency_norm(i, j) = a;
      kernel.laplacian(i, j) = (i == j ? 1.0 : 0.0) - a;
    }
  return kernel;
}

}  // namespace sieformer
