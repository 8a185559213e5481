#include "sieformer/filters.hpp"

#include <cmath>
#include <cstdio>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

void check_signal(const RealMatrix& v, std::size_t n, const char* who) {
  if (v.rows() != n || v.empty())
    throw DimensionError(std::string(who) + ": signal rows must match kernel size");
  if (!all_finite(v)) throw NumericError(std::string(who) + ": non-finite signal");
}

void check_weight(const RealMatrix& w, std::size_t c, const char* who) {
  if (w.rows() != c || w.cols() != c)
    throw DimensionError(std::string(who) + ": weight must be C x C");
  if (!all_finite(w)) throw NumericError(std::string(who) + ": non-finite weight");
}

}  // namespace

RealMatrix gft(const RealMatrix& v, const SpectralBasis& basis) {
  check_signal(v, basis.vectors.rows(), "gft");
  return matmul(transpose(basis.vectors), v);
}

RealMatrix igft(const RealMatrix& v_hat, const SpectralBasis& basis) {
  check_signal(v_hat, basis.vectors.rows(), "igft");
  return matmul(basis.vectors, v_hat);
}

RealMatrix apply_spectral_filter(const RealMatrix& v, const SpectralBasis& basis,
                                 const std::function<double(double)>& response) {
  check_signal(v, basis.vectors.rows(), "apply_spectral_filter");
  RealMatrix coeffs = gft(v, basis);
  for (std::size_t k = 0; k < basis.values.size(); ++k) {
    const double g = response(basis.values[k]);
    if (!std::isfinite(g))
      throw NumericError("apply_spectral_filter: non-finite response value");
    for (std::size_t j = 0; j < coeffs.cols(); ++j) coeffs(k, j) *= g;
  }
  return igft(coeffs, basis);
}

RealMatrix allpass_apply(const RealMatrix& v) {
  if (!all_finite(v)) throw NumericError("allpass_apply: non-finite signal");
  return v;
}

double lowhigh_response(PassBand kind, double gain, double balance, double x) {
  if (!(gain > 0.0) || !std::isfinite(gain))
    throw ParameterError("lowhigh_response: gain must be positive");
  if (!(balance > 0.0) || !(balance < 1.0))
    throw ParameterError("lowhigh_response: balance must lie in (0, 1)");
  const double low = gain * (balance * x - (1.0 - balance));
  return kind == PassBand::low ? low : -low;
}

RealMatrix baf_apply(const AffinityKernel& kernel, const RealMatrix& v,
                     const RealMatrix& w_p, const RealMatrix& w_r) {
  const std::size_t n = kernel.adjacency_norm.rows();
  check_signal(v, n, "baf_apply");
  check_weight(w_p, v.cols(), "baf_apply");
  check_weight(w_r, v.cols(), "baf_apply");

  const RealMatrix a2v = matmul(kernel.adjacency_norm, matmul(kernel.adjacency_norm, v));
  return matmul(a2v, w_p) + matmul(a2v - v, w_r);
}

RealMatrix chebyshev_filter(const AffinityKernel& kernel, const RealMatrix& v,
                            const std::vector<double>& theta, double lambda_max) {
  const std::size_t n = kernel.laplacian.rows();
  check_signal(v, n, "chebyshev_filter");
  if (theta.empty()) throw ParameterError("chebyshev_filter: empty coefficient vector");
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
    throw ParameterError("chebyshev_filter: lambda_max must be positive");

  // Rescaled operator 2 L / lambda_max - I keeps the spectrum in [-1, 1].
  RealMatrix l_hat = (2.0 / lambda_max) * kernel.laplacian;
  for (std::size_t i = 0; i < n; ++i) l_hat(i, i) -= 1.0;

  RealMatrix t_prev = v;
  RealMatrix acc = theta[0] * t_prev;
  if (theta.size() == 1) return acc;

  RealMatrix t_cur = matmul(l_hat, v);
  acc += theta[1] * t_cur;
  for (std::size_t k = 2; k < theta.size(); ++k) {
    RealMatrix t_next = 2.0 * matmul(l_hat, t_cur) - t_prev;
    acc += theta[k] * t_next;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return acc;
}

RealMatrix arma1_apply(const AffinityKernel& kernel, const RealMatrix& v,
                       const RealMatrix& w_alpha, const RealMatrix& w_beta,
                       const RealMatrix& w_tau, std::size_t iterations) {
  const std::size_t n = kernel.adjacency_norm.rows();
  check_signal(v, n, "arma1_apply");
  check_weight(w_alpha, v.cols(), "arma1_apply");
  check_weight(w_beta, v.cols(), "arma1_apply");
  check_weight(w_tau, v.cols(), "arma1_apply");
  if (iterations < 1) throw ParameterError("arma1_apply: iterations must be >= 1");

  if (iterations == 1) {
    const RealMatrix vt = matmul(v, w_tau);
    return vt + matmul(matmul(kernel.adjacency_norm, vt), w_alpha) + matmul(v, w_beta);
  }
  return arma1_recursion(kernel, v, w_alpha, w_beta, iterations);
}

RealMatrix arma1_recursion(const AffinityKernel& kernel, const RealMatrix& v,
                           const RealMatrix& w_alpha, const RealMatrix& w_beta,
                           std::size_t iterations) {
  const std::size_t n = kernel.adjacency_norm.rows();
  check_signal(v, n, "arma1_recursion");
  check_weight(w_alpha, v.cols(), "arma1_recursion");
  check_weight(w_beta, v.cols(), "arma1_recursion");

  const RealMatrix vb = matmul(v, w_beta);
  RealMatrix x = vb;
  for (std::size_t t = 0; t < iterations; ++t)
    x = matmul(matmul(kernel.adjacency_norm, x), w_alpha) + vb;
  return x;
}

RealMatrix cayley_apply(const AffinityKernel& kernel, const RealMatrix& v,
                        const RealMatrix& w_1, const RealMatrix& w_2,
                        const RealMatrix& w_h2) {
  const std::size_t n = kernel.laplacian.rows();
  check_signal(v, n, "cayley_apply");
  check_weight(w_1, v.cols(), "cayley_apply");
  check_weight(w_2, v.cols(), "cayley_apply");
  check_weight(w_h2, v.cols(), "cayley_apply");

  const RealMatrix l2v = matmul(kernel.laplacian, matmul(kernel.laplacian, v));
  return matmul(v, w_1) + 2.0 * matmul(matmul(l2v, w_h2) + v, w_2);
}

RealMatrix apply_filter(const FilterSpec& spec, const AffinityKernel& kernel,
                        const RealMatrix& v) {
  return std::visit(
      [&](const auto& f) -> RealMatrix {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, AllPassFilter>) {
          return allpass_apply(v);
        } else if constexpr (std::is_same_v<T, LowPassFilter>) {
          const SpectralBasis basis = jacobi_eigh(kernel.laplacian);
          return apply_spectral_filter(v, basis, [&](double lam) {
            return lowhigh_response(PassBand::low, f.gain, f.balance, lam);
          });
        } else if constexpr (std::is_same_v<T, HighPassFilter>) {
          const SpectralBasis basis = jacobi_eigh(kernel.laplacian);
          return apply_spectral_filter(v, basis, [&](double lam) {
            return lowhigh_response(PassBand::high, f.gain, f.balance, lam);
          });
        } else if constexpr (std::is_same_v<T, BandAdaptiveFilter>) {
          return baf_apply(kernel, v, f.w_p, f.w_r);
        } else if constexpr (std::is_same_v<T, ChebyshevFilter>) {
          return chebyshev_filter(kernel, v, f.theta, f.lambda_max);
        } else if constexpr (std::is_same_v<T, Arma1Filter>) {
          return arma1_apply(kernel, v, f.w_alpha, f.w_beta, f.w_tau, f.iterations);
        } else {
          return cayley_apply(kernel, v, f.w_1, f.w_2, f.w_h2);
        }
      },
      spec);
}

namespace {

double scalar_weight(const RealMatrix& w, const char* who) {
  if (w.rows() != 1 || w.cols() != 1)
    throw ParameterError(std::string(who) + ": scalar response needs 1x1 weights");
  return w(0, 0);
}

double chebyshev_scalar(const std::vector<double>& theta, double lambda_max,
                        double lam) {
  if (theta.empty()) throw ParameterError("scalar_response: empty coefficient vector");
  const double x = 2.0 * lam / lambda_max - 1.0;
  double t_prev = 1.0;
  double acc = theta[0];
  if (theta.size() == 1) return acc;
  double t_cur = x;
  acc += theta[1] * t_cur;
  for (std::size_t k = 2; k < theta.size(); ++k) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    acc += theta[k] * t_next;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return acc;
}

}  // namespace

ResponseAxis response_axis(const FilterSpec& spec) {
  if (std::holds_alternative<AllPassFilter>(spec) ||
      std::holds_alternative<BandAdaptiveFilter>(spec))
    return ResponseAxis::adjacency;
  return ResponseAxis::laplacian;
}

double scalar_response(const FilterSpec& spec, double x) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, AllPassFilter>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, LowPassFilter>) {
          return lowhigh_response(PassBand::low, f.gain, f.balance, x);
        } else if constexpr (std::is_same_v<T, HighPassFilter>) {
          return lowhigh_response(PassBand::high, f.gain, f.balance, x);
        } else if constexpr (std::is_same_v<T, BandAdaptiveFilter>) {
          const double wp = scalar_weight(f.w_p, "scalar_response");
          const double wr = scalar_weight(f.w_r, "scalar_response");
          return wp * x * x + wr * (x * x - 1.0);
        } else if constexpr (std::is_same_v<T, ChebyshevFilter>) {
          return chebyshev_scalar(f.theta, f.lambda_max, x);
        } else if constexpr (std::is_same_v<T, Arma1Filter>) {
          const double alpha = scalar_weight(f.w_alpha, "scalar_response");
          const double beta = scalar_weight(f.w_beta, "scalar_response");
          // Steady state of the recursion on a Laplacian eigenvalue.
          const double denom = 1.0 - alpha + alpha * x;
          if (std::fabs(denom) < 1e-12)
            throw NumericError("scalar_response: rational filter pole on sample grid");
          return beta / denom;
        } else {
          const double w1 = scalar_weight(f.w_1, "scalar_response");
          const double w2 = scalar_weight(f.w_2, "scalar_response");
          const double wh2 = scalar_weight(f.w_h2, "scalar_response");
          return w1 + 2.0 * (x * x * wh2 + 1.0) * w2;
        }
      },
      spec);
}

std::string response_csv(const FilterSpec& spec) {
  const ResponseAxis axis = response_axis(spec);
  std::string out = axis == ResponseAxis::adjacency ? "mu,response\n" : "lambda,response\n";
  char line[80];
  for (int i = 0; i <= 200; ++i) {
    const double x = axis == ResponseAxis::adjacency
                         ? (static_cast<double>(i) - 100.0) / 100.0
                         : static_cast<double>(i) / 100.0;
    const double g = scalar_response(spec, x);
    std::snprintf(line, sizeof(line), "%.2f,%.12g\n", x, g);
    out += line;
  }
  return out;
}

}  // namespace sieformer
