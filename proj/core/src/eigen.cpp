#include "sieformer/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

double off_diagonal_norm(const RealMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

}  // namespace

SpectralBasis jacobi_eigh(const RealMatrix& s, double tol, int max_sweeps) {
  if (s.rows() != s.cols() || s.empty())
    throw DimensionError("jacobi_eigh: matrix must be square and non-empty");
  if (!all_finite(s)) throw NumericError("jacobi_eigh: non-finite entry");
  if (tol <= 0.0) throw ParameterError("jacobi_eigh: tol must be positive");

  const std::size_t n = s.rows();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::fabs(s(i, j) - s(j, i)));
  if (asym > 1e-10) throw NumericError("jacobi_eigh: input asymmetric beyond 1e-10");

  RealMatrix a = s;
  // Work on the exactly symmetric average so rotations preserve symmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = m;
      a(j, i) = m;
    }
  RealMatrix v = RealMatrix::identity(n);

  bool converged = off_diagonal_norm(a) < tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::fabs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = arp - sn * (arq + tau * arp);
          a(r, q) = arq + sn * (arp - tau * arq);
          a(p, r) = a(r, p);
          a(q, r) = a(r, q);
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - sn * (vrq + tau * vrp);
          v(r, q) = vrq + sn * (vrp - tau * vrq);
        }
      }
    }
    converged = off_diagonal_norm(a) < tol;
  }
  if (!converged)
    throw NumericError("jacobi_eigh: no convergence within sweep limit");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SpectralBasis basis;
  basis.values.resize(n);
  basis.vectors = RealMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    basis.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) basis.vectors(r, k) = v(r, order[k]);
  }
  return basis;
}

}  // namespace sieformer
