#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <cstddef>

#include "sieformer/block.hpp"
#include "sieformer/eigen.hpp"
#include "sieformer/fft.hpp"
#include "sieformer/filters.hpp"
#include "sieformer/graph.hpp"
#include "sieformer/matrix.hpp"
#include "sieformer/rng.hpp"

using namespace sieformer;

namespace {

RealMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  RealMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  return m;
}

AffinityKernel random_kernel(std::size_t n, std::size_t embed, Rng& rng) {
  RealMatrix q = random_matrix(n, embed, rng);
  RealMatrix k = random_matrix(n, embed, rng);
  return build_kernel(build_affinity(q, k, std::sqrt(static_cast<double>(embed))));
}

}  // namespace

// Covers the radix-2 path (8, 64), the mixed/odd path (12), and the
// prime-size convolution path (31).
static void BM_Fft2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  ComplexMatrix x = random_complex(n, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fft2(x));
  }
}
BENCHMARK(BM_Fft2)->Arg(8)->Arg(12)->Arg(31)->Arg(64);

static void BM_JacobiEigh(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  AffinityKernel kernel = random_kernel(n, 16, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobi_eigh(kernel.laplacian));
  }
}
BENCHMARK(BM_JacobiEigh)->Arg(8)->Arg(16)->Arg(32);

static void BM_BafApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t embed = 16;
  Rng rng(3);
  AffinityKernel kernel = random_kernel(n, embed, rng);
  RealMatrix v = random_matrix(n, embed, rng);
  RealMatrix w_p = random_matrix(embed, embed, rng);
  RealMatrix w_r = random_matrix(embed, embed, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(baf_apply(kernel, v, w_p, w_r));
  }
}
BENCHMARK(BM_BafApply)->Arg(8)->Arg(32);

static void BM_ChebyshevFilter(benchmark::State& state) {
  const std::size_t n = 32;
  const std::size_t embed = 16;
  Rng rng(4);
  AffinityKernel kernel = random_kernel(n, embed, rng);
  RealMatrix v = random_matrix(n, embed, rng);
  const std::vector<double> theta = {0.3, -0.6, 0.25, 0.1, -0.05, 0.02};
  for (auto _ : state) {
    benchmark::DoNotOptimize(chebyshev_filter(kernel, v, theta));
  }
}
BENCHMARK(BM_ChebyshevFilter);

// Desk-scale block shapes: 8 tokens x 16 channels, 16-dim projections.
static void BM_BlockForward(benchmark::State& state) {
  BlockConfig config;
  config.n_tokens = 8;
  config.channels = 16;
  config.embed = 16;
  config.heads = 2;
  Rng rng(5);
  BlockParams params = init_block_params(config, rng);
  RealMatrix x = random_matrix(config.n_tokens, config.channels, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sieformer_block_forward(x, config, params));
  }
}
BENCHMARK(BM_BlockForward);

static void BM_BlockForwardBackward(benchmark::State& state) {
  BlockConfig config;
  config.n_tokens = 8;
  config.channels = 16;
  config.embed = 16;
  config.heads = 2;
  Rng rng(6);
  BlockParams params = init_block_params(config, rng);
  RealMatrix x = random_matrix(config.n_tokens, config.channels, rng);
  RealMatrix upstream = random_matrix(config.n_tokens, config.channels, rng);
  for (auto _ : state) {
    BlockForward fwd = sieformer_block_forward(x, config, params);
    params.zero_grads();
    block_backward(fwd, upstream, params);
    benchmark::DoNotOptimize(params);
  }
}
BENCHMARK(BM_BlockForwardBackward);

BENCHMARK_MAIN();
