#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sieformer/block.hpp"
#include "sieformer/dataset.hpp"
#include "sieformer/metrics.hpp"
#include "sieformer/rng.hpp"

namespace sieformer {

enum class BlockVariant {
  kBaseline,   // plain residual attention
  kSieformer,  // frequency-modulated values + adjacency filter branch
};

const char* variant_name(BlockVariant variant);
BlockVariant variant_from_name(const std::string& name);  // throws ConfigError

// Contrastive training hyperparameters. Temperatures must be positive,
// lambda_sup in [0, 1].
struct TrainConfig {
  double lambda_sup = 0.35;
  double tau_u = 0.07;
  double tau_c = 1.0;
  // Classification-head temperatures (distillation objective).
  double tau_s = 0.1;
  double tau_t_start = 0.07;
  double tau_t_end = 0.04;
  std::size_t tau_t_warmup_epochs = 30;
  double me_max_weight = 1.0;

  double lr = 0.0005;
  std::size_t steps = 200;
  std::size_t batch = 32;
  double aug_noise = 0.05;   // additive Gaussian view noise
  double aug_jitter = 0.02;  // per-token offset shared across channels
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

// One augmented view: x + noise * G + per-token offsets.
RealMatrix augment_sample(const RealMatrix& x, double noise, double jitter, Rng& rng);

// Rows are L2-normalized mean-pooled block outputs, one per sample.
RealMatrix embed_dataset(const std::vector<RealMatrix>& samples,
                         const BlockConfig& config, const BlockParams& params,
                         BlockVariant variant);

// Embeds every sample, clusters with labeled anchors (K = true class
// count), and scores the unlabeled instances under one global matching.
Metrics evaluate_gcd(const GCDDataset& dataset, const BlockConfig& config,
                     const BlockParams& params, BlockVariant variant,
                     std::uint64_t kmeans_seed, std::size_t kmeans_iters = 100);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  std::size_t step = 0;   // global step count when recorded
  double mean_loss = 0.0;
  Metrics metrics;
};

struct TrainResult {
  BlockParams params;
  std::vector<double> step_losses;
  std::vector<EpochRecord> history;  // one record per epoch plus the final state
  Metrics final_metrics;
};

// Single-threaded SGD on the two-view contrastive objective. Batches cycle
// through a per-epoch shuffle of all samples; gradients flow through the
// embedding normalization and mean-pooling into the block parameters.
// Deterministic function of (dataset, config, variant, train.seed).
// Throws TrainingError with the step index if the loss leaves the reals.
TrainResult train_loop(const GCDDataset& dataset, const BlockConfig& config,
                       BlockVariant variant, const TrainConfig& train);

}  // namespace sieformer
