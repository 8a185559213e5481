#include "sieformer/assignment.hpp"

#include <limits>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

// Requires rows <= cols. 1-indexed potentials formulation.
std::vector<std::ptrdiff_t> solve_wide(const RealMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::ptrdiff_t> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<std::ptrdiff_t>(j - 1);
  return row_to_col;
}

}  // namespace

Assignment hungarian(const RealMatrix& cost) {
  if (cost.empty()) throw DimensionError("hungarian: empty cost matrix");
  if (!all_finite(cost)) throw NumericError("hungarian: non-finite cost");

  Assignment result;
  if (cost.rows() <= cost.cols()) {
    result.row_to_col = solve_wide(cost);
  } else {
    const std::vector<std::ptrdiff_t> col_to_row = solve_wide(transpose(cost));
    result.row_to_col.assign(cost.rows(), -1);
    for (std::size_t j = 0; j < col_to_row.size(); ++j)
      if (col_to_row[j] >= 0)
        result.row_to_col[static_cast<std::size_t>(col_to_row[j])] =
            static_cast<std::ptrdiff_t>(j);
  }
  for (std::size_t i = 0; i < result.row_to_col.size(); ++i)
    if (result.row_to_col[i] >= 0)
      result.total_cost += cost(i, static_cast<std::size_t>(result.row_to_col[i]));
  return result;
}

}  // namespace sieformer
