#pragma once

#include <complex>
#include <cstdint>

#include "sieformer/matrix.hpp"
#include "sieformer/rng.hpp"

namespace sieformer::testutil {

inline RealMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                                double scale = 1.0) {
  RealMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  return m;
}

inline ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng,
                                    double scale = 1.0) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = {scale * rng.normal(), scale * rng.normal()};
  return m;
}

// Symmetric matrix with entries of order `scale`.
inline RealMatrix random_symmetric(std::size_t n, Rng& rng, double scale = 1.0) {
  RealMatrix m = random_matrix(n, n, rng, scale);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  return m;
}

// Rows scaled to unit L2 norm (useful for embedding-loss inputs).
inline RealMatrix normalize_rows(RealMatrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double norm2 = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) norm2 += m(i, j) * m(i, j);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= inv;
  }
  return m;
}

}  // namespace sieformer::testutil
