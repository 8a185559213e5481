#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "sieformer/eigen.hpp"
#include "sieformer/graph.hpp"
#include "sieformer/matrix.hpp"

namespace sieformer {

// --- graph Fourier transform ------------------------------------------------

// Analysis: U^T V, coefficients of the token signal in the eigenbasis.
RealMatrix gft(const RealMatrix& v, const SpectralBasis& basis);

// Synthesis: U V_hat; inverse of gft for an orthonormal basis.
RealMatrix igft(const RealMatrix& v_hat, const SpectralBasis& basis);

// U diag(response(lambda_k)) U^T V. The response must stay finite on the
// basis eigenvalues.
RealMatrix apply_spectral_filter(const RealMatrix& v, const SpectralBasis& basis,
                                 const std::function<double(double)>& response);

// --- filter families ---------------------------------------------------------

struct AllPassFilter {};

enum class PassBand { low, high };

// First-order split: low passes p(a*x - (1-a)), high its negation.
// gain > 0, balance in (0, 1); evaluated on the Laplacian axis [0, 2].
struct LowPassFilter {
  double gain = 1.0;
  double balance = 0.5;
};
struct HighPassFilter {
  double gain = 1.0;
  double balance = 0.5;
};

// Band-adaptive pair over powers of the normalized adjacency A:
//   S = A^2 V W_p + (A^2 - I) V W_r.
// On adjacency eigenvalues mu, the two routes respond mu^2 and mu^2 - 1.
struct BandAdaptiveFilter {
  RealMatrix w_p;
  RealMatrix w_r;
};

// Truncated Chebyshev expansion on the rescaled Laplacian
// 2 L / lambda_max - I.
struct ChebyshevFilter {
  std::vector<double> theta;
  double lambda_max = 2.0;
};

// First-order rational (auto-regressive moving-average) filter. With the
// Laplacian bounds pinned at [0, 2], the propagation matrix
// ((lambda_max - lambda_min)/2) I - L collapses to the normalized
// adjacency. iterations = 1 selects the closed form
//   S = V W_tau + (T V W_tau W_alpha + V W_beta);
// iterations > 1 runs the fixed-point recursion
//   X <- T X W_alpha + V W_beta   starting from X = V W_beta.
struct Arma1Filter {
  RealMatrix w_alpha;
  RealMatrix w_beta;
  RealMatrix w_tau;
  std::size_t iterations = 1;
};

// Quadratic rational form S = V W_1 + 2 (L^2 V W_h2 + V) W_2 with L the
// normalized Laplacian.
struct CayleyFilter {
  RealMatrix w_1;
  RealMatrix w_2;
  RealMatrix w_h2;
};

using FilterSpec = std::variant<AllPassFilter, LowPassFilter, HighPassFilter,
                                BandAdaptiveFilter, ChebyshevFilter, Arma1Filter,
                                CayleyFilter>;

// --- filter application -------------------------------------------------------

RealMatrix allpass_apply(const RealMatrix& v);

double lowhigh_response(PassBand kind, double gain, double balance, double x);

RealMatrix baf_apply(const AffinityKernel& kernel, const RealMatrix& v,
                     const RealMatrix& w_p, const RealMatrix& w_r);

RealMatrix chebyshev_filter(const AffinityKernel& kernel, const RealMatrix& v,
                            const std::vector<double>& theta, double lambda_max = 2.0);

RealMatrix arma1_apply(const AffinityKernel& kernel, const RealMatrix& v,
                       const RealMatrix& w_alpha, const RealMatrix& w_beta,
                       const RealMatrix& w_tau, std::size_t iterations = 1);

// Fixed-point iterate X^(t) of the rational recursion; t = 0 gives V W_beta.
RealMatrix arma1_recursion(const AffinityKernel& kernel, const RealMatrix& v,
                           const RealMatrix& w_alpha, const RealMatrix& w_beta,
                           std::size_t iterations);

RealMatrix cayley_apply(const AffinityKernel& kernel, const RealMatrix& v,
                        const RealMatrix& w_1, const RealMatrix& w_2,
                        const RealMatrix& w_h2);

// Uniform dispatch over FilterSpec; low/high-pass go through the spectral
// route (eigendecomposition of the kernel Laplacian).
RealMatrix apply_filter(const FilterSpec& spec, const AffinityKernel& kernel,
                        const RealMatrix& v);

// --- scalar frequency response -------------------------------------------------

// Axis a filter's scalar response lives on: adjacency eigenvalues
// mu in [-1, 1] or Laplacian eigenvalues lambda in [0, 2].
enum class ResponseAxis { adjacency, laplacian };

ResponseAxis response_axis(const FilterSpec& spec);

// Pointwise response for scalar-weight specs (matrix weights must be 1x1).
// The rational filter reports its steady-state response
// beta / (1 - alpha + alpha * lambda).
double scalar_response(const FilterSpec& spec, double x);

// CSV table of the scalar response: header names the axis
// ("mu,response" or "lambda,response"), 201 rows, step 0.01.
std::string response_csv(const FilterSpec& spec);

}  // namespace sieformer
