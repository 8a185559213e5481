#include "sieformer/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "sieformer/error.hpp"
#include "sieformer/kmeans.hpp"
#include "sieformer/losses.hpp"

namespace sieformer {

namespace {

constexpr std::uint64_t kOrderStream = 0x6f72646572ULL;    // batch ordering
constexpr std::uint64_t kAugmentStream = 0x617567ULL;      // view augmentation
constexpr std::uint64_t kClusterStream = 0x636c7573ULL;    // k-means seeding

BlockForward run_forward(const RealMatrix& x, const BlockConfig& config,
                         const BlockParams& params, BlockVariant variant) {
  return variant == BlockVariant::kSieformer
             ? sieformer_block_forward(x, config, params)
             : baseline_block_forward(x, config, params);
}

// Mean-pool rows, then L2-normalize. Returns the embedding and the pieces
// the backward chain needs.
struct PooledEmbedding {
  std::vector<double> z;       // unit embedding, length C
  std::vector<double> pooled;  // pre-normalization mean, length C
  double norm = 0.0;
};

PooledEmbedding pool_embedding(const RealMatrix& y) {
  PooledEmbedding out;
  std::size_t n = y.rows(), c = y.cols();
  out.pooled.assign(c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < c; ++k) out.pooled[k] += y(i, k);
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    out.pooled[k] /= static_cast<double>(n);
    sq += out.pooled[k] * out.pooled[k];
  }
  out.norm = std::sqrt(sq);
  if (!(out.norm > 1e-12)) {
    throw NumericError("embedding collapsed to zero norm");
  }
  out.z.resize(c);
  for (std::size_t k = 0; k < c; ++k) out.z[k] = out.pooled[k] / out.norm;
  return out;
}

// dLoss/dY from dLoss/dz: through the normalization Jacobian
// (g - (g.z) z) / |e|, then spread uniformly over the pooled rows.
RealMatrix pooled_upstream(const PooledEmbedding& emb, const RealMatrix& zgrad,
                           std::size_t row, std::size_t n_tokens) {
  std::size_t c = emb.z.size();
  double gz = 0.0;
  for (std::size_t k = 0; k < c; ++k) gz += zgrad(row, k) * emb.z[k];
  RealMatrix up(n_tokens, c);
  for (std::size_t k = 0; k < c; ++k) {
    double ge = (zgrad(row, k) - gz * emb.z[k]) / emb.norm;
    double per_row = ge / static_cast<double>(n_tokens);
    for (std::size_t i = 0; i < n_tokens; ++i) up(i, k) = per_row;
  }
  return up;
}

void sgd_step(BlockParams& params, double lr) {
  auto update_real = [lr](Param<RealMatrix>& p) {
    if (p.value.empty()) return;
    for (std::size_t i = 0; i < p.value.rows(); ++i) {
      for (std::size_t j = 0; j < p.value.cols(); ++j) {
        p.value(i, j) -= lr * p.grad(i, j);
      }
    }
  };
  update_real(params.w_q);
  update_real(params.w_k);
  update_real(params.w_v);
  update_real(params.w_z);
  update_real(params.w_p);
  update_real(params.w_r);
  update_real(params.w_b);
  for (auto& mask : params.w_c) {
    for (std::size_t i = 0; i < mask.value.rows(); ++i) {
      for (std::size_t j = 0; j < mask.value.cols(); ++j) {
        mask.value(i, j) -= lr * mask.grad(i, j);
      }
    }
  }
}

// Anchor ids for clustering: labeled old classes remapped to 0..L-1 in
// sorted order, everything else free.
std::vector<int> anchor_labels(const GCDDataset& dataset) {
  std::map<int, int> remap;
  for (int id : dataset.old_classes) {
    remap.emplace(id, static_cast<int>(remap.size()));
  }
  std::vector<int> anchors(dataset.size(), -1);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.is_labeled[i]) anchors[i] = remap.at(dataset.labels[i]);
  }
  return anchors;
}

}  // namespace

const char* variant_name(BlockVariant variant) {
  return variant == BlockVariant::kSieformer ? "sieformer" : "baseline";
}

BlockVariant variant_from_name(const std::string& name) {
  if (name == "baseline") return BlockVariant::kBaseline;
  if (name == "sieformer") return BlockVariant::kSieformer;
  throw ConfigError("unknown block variant: " + name);
}

void TrainConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(what) + " must be positive");
    }
  };
  positive(tau_u, "tau_u");
  positive(tau_c, "tau_c");
  positive(tau_s, "tau_s");
  positive(tau_t_start, "tau_t_start");
  positive(tau_t_end, "tau_t_end");
  if (!(lambda_sup >= 0.0 && lambda_sup <= 1.0)) {
    throw ConfigError("lambda_sup must lie in [0, 1]");
  }
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be >= 0");
  if (batch < 2) throw ConfigError("batch must be >= 2");
  if (!(aug_noise >= 0.0) || !(aug_jitter >= 0.0)) {
    throw ConfigError("augmentation scales must be >= 0");
  }
  if (!(me_max_weight >= 0.0)) throw ConfigError("me_max_weight must be >= 0");
}

RealMatrix augment_sample(const RealMatrix& x, double noise, double jitter, Rng& rng) {
  RealMatrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t k = 0; k < out.cols(); ++k) {
      out(i, k) += noise * rng.normal();
    }
  }
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double offset = jitter * rng.normal();
    for (std::size_t k = 0; k < out.cols(); ++k) out(i, k) += offset;
  }
  return out;
}

RealMatrix embed_dataset(const std::vector<RealMatrix>& samples,
                         const BlockConfig& config, const BlockParams& params,
                         BlockVariant variant) {
  if (samples.empty()) throw DimensionError("embed_dataset: no samples");
  RealMatrix z(samples.size(), config.channels);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    BlockForward fwd = run_forward(samples[s], config, params, variant);
    PooledEmbedding emb = pool_embedding(fwd.y());
    for (std::size_t k = 0; k < config.channels; ++k) z(s, k) = emb.z[k];
  }
  return z;
}

Metrics evaluate_gcd(const GCDDataset& dataset, const BlockConfig& config,
                     const BlockParams& params, BlockVariant variant,
                     std::uint64_t kmeans_seed, std::size_t kmeans_iters) {
  RealMatrix z = embed_dataset(dataset.samples, config, params, variant);
  KMeansResult clusters = semi_supervised_kmeans(
      z, anchor_labels(dataset), static_cast<std::size_t>(dataset.num_classes),
      kmeans_iters, kmeans_seed);

  std::vector<std::size_t> pred;
  std::vector<int> gt;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.is_labeled[i]) continue;
    pred.push_back(clusters.assignments[i]);
    gt.push_back(dataset.labels[i]);
  }
  return cluster_accuracy(pred, gt, dataset.old_classes);
}

TrainResult train_loop(const GCDDataset& dataset, const BlockConfig& config,
                       BlockVariant variant, const TrainConfig& train) {
  config.validate();
  train.validate();
  if (dataset.size() < 2) {
    throw ConfigError("train_loop: need at least 2 samples");
  }

  Rng root(train.seed);
  Rng init_rng = root.stream(0x696e6974ULL);
  Rng order_rng = root.stream(kOrderStream);
  Rng augment_rng = root.stream(kAugmentStream);
  std::uint64_t kmeans_seed = root.stream(kClusterStream).next_u64();

  TrainResult result;
  result.params = init_block_params(config, init_rng);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  order_rng.shuffle(order);
  std::size_t cursor = 0;
  std::size_t epoch = 1;
  double epoch_loss = 0.0;
  std::size_t epoch_steps = 0;

  auto record_epoch = [&](std::size_t step) {
    EpochRecord record;
    record.epoch = epoch;
    record.step = step;
    record.mean_loss = epoch_steps ? epoch_loss / static_cast<double>(epoch_steps)
                                   : 0.0;
    record.metrics = evaluate_gcd(dataset, config, result.params, variant,
                                  kmeans_seed);
    result.history.push_back(record);
  };

  for (std::size_t step = 1; step <= train.steps; ++step) {
    // Next batch from the epoch order; reshuffle at each wraparound.
    std::vector<std::size_t> batch;
    while (batch.size() < train.batch) {
      if (cursor == order.size()) {
        record_epoch(step - 1);
        order_rng.shuffle(order);
        cursor = 0;
        ++epoch;
        epoch_loss = 0.0;
        epoch_steps = 0;
        if (!batch.empty()) break;  // keep batches within one epoch
      }
      batch.push_back(order[cursor++]);
    }
    if (batch.size() < 2) continue;  // 1-sample tail cannot form a batch

    std::size_t b = batch.size();
    RealMatrix z1(b, config.channels), z2(b, config.channels);
    std::vector<BlockForward> fwd1(b), fwd2(b);
    std::vector<PooledEmbedding> emb1(b), emb2(b);
    std::vector<int> batch_labels(b, -1);
    for (std::size_t s = 0; s < b; ++s) {
      const RealMatrix& x = dataset.samples[batch[s]];
      RealMatrix v1 = augment_sample(x, train.aug_noise, train.aug_jitter, augment_rng);
      RealMatrix v2 = augment_sample(x, train.aug_noise, train.aug_jitter, augment_rng);
      fwd1[s] = run_forward(v1, config, result.params, variant);
      fwd2[s] = run_forward(v2, config, result.params, variant);
      emb1[s] = pool_embedding(fwd1[s].y());
      emb2[s] = pool_embedding(fwd2[s].y());
      for (std::size_t k = 0; k < config.channels; ++k) {
        z1(s, k) = emb1[s].z[k];
        z2(s, k) = emb2[s].z[k];
      }
      if (dataset.is_labeled[batch[s]]) batch_labels[s] = dataset.labels[batch[s]];
    }

    PairGrad loss = contrastive_objective_grad(z1, z2, batch_labels,
                                               train.lambda_sup, train.tau_u,
                                               train.tau_c);
    if (!std::isfinite(loss.value)) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "training diverged at step %zu", step);
      throw TrainingError(buf);
    }
    result.step_losses.push_back(loss.value);
    epoch_loss += loss.value;
    ++epoch_steps;

    result.params.zero_grads();
    for (std::size_t s = 0; s < b; ++s) {
      block_backward(fwd1[s], pooled_upstream(emb1[s], loss.grad1, s, config.n_tokens),
                     result.params);
      block_backward(fwd2[s], pooled_upstream(emb2[s], loss.grad2, s, config.n_tokens),
                     result.params);
    }
    sgd_step(result.params, train.lr);
  }

  record_epoch(train.steps);
  result.final_metrics = result.history.back().metrics;
  return result;
}

}  // namespace sieformer
