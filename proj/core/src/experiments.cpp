#include "sieformer/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "json.hpp"
#include "sieformer/checkpoint.hpp"
#include "sieformer/error.hpp"
#include "sieformer/graph.hpp"
#include "sieformer/rng.hpp"

namespace sieformer {

using nlohmann::json;

// ---- grad-check ---------------------------------------------------------------

GradCheckConfig GradCheckConfig::from_config(const KvConfig& kv) {
  kv.require_known_keys("grad-check",
                        {"n_tokens", "channels", "embed", "heads", "bias_ablation",
                         "trials", "fd_step", "rel_tol", "seed", "corrupt"});
  GradCheckConfig config;
  const char* s = "grad-check";
  config.block.n_tokens = kv.get_u64_or(s, "n_tokens", config.block.n_tokens);
  config.block.channels = kv.get_u64_or(s, "channels", config.block.channels);
  config.block.embed = kv.get_u64_or(s, "embed", config.block.embed);
  config.block.heads = kv.get_u64_or(s, "heads", config.block.heads);
  config.block.bias_ablation =
      kv.get_bool_or(s, "bias_ablation", config.block.bias_ablation);
  config.trials = kv.get_u64_or(s, "trials", config.trials);
  config.fd_step = kv.get_double_or(s, "fd_step", config.fd_step);
  config.rel_tol = kv.get_double_or(s, "rel_tol", config.rel_tol);
  config.seed = kv.get_u64_or(s, "seed", config.seed);
  config.corrupt = kv.get_string_or(s, "corrupt", config.corrupt);
  return config;
}

namespace {

RealMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                         double scale = 1.0) {
  RealMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

// Loss functional for the finite-difference probe: sum(Y (.) R) has the
// constant upstream gradient R.
double probe_loss(const RealMatrix& x, const BlockConfig& config,
                  const BlockParams& params, const RealMatrix& r) {
  BlockForward fwd = sieformer_block_forward(x, config, params);
  return sum(hadamard(fwd.y(), r));
}

constexpr double kGradSignalFloor = 1e-8;

}  // namespace

GradCheckReport run_grad_check(const GradCheckConfig& config) {
  config.block.validate();
  if (!(config.fd_step > 0.0) || !(config.rel_tol > 0.0)) {
    throw ConfigError("grad-check: fd_step and rel_tol must be positive");
  }
  if (config.trials == 0) throw ConfigError("grad-check: trials must be >= 1");
  if (config.block.freeze_wz) {
    throw ConfigError("grad-check: frozen parameters have no gradient to check");
  }

  GradCheckReport report;
  report.rel_tol = config.rel_tol;
  auto entry_for = [&report](const std::string& name) -> GradCheckReport::Entry& {
    for (auto& e : report.entries) {
      if (e.param == name) return e;
    }
    report.entries.push_back({name, 0.0, 0, true});
    return report.entries.back();
  };

  Rng rng = Rng(config.seed).stream(0x67726164ULL);
  const double h = config.fd_step;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    BlockParams params = init_block_params(config.block, rng);
    // Move the filter parameters off their pass-through initialization so
    // their gradients are probed at a generic operating point.
    auto jitter_real = [&rng](RealMatrix& m, double scale) {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += scale * rng.normal();
      }
    };
    jitter_real(params.w_p.value, 0.2);
    jitter_real(params.w_r.value, 0.2);
    if (config.block.bias_ablation) jitter_real(params.w_b.value, 0.2);
    for (auto& mask : params.w_c) {
      for (std::size_t i = 0; i < mask.value.rows(); ++i) {
        for (std::size_t j = 0; j < mask.value.cols(); ++j) {
          mask.value(i, j) += std::complex<double>(0.1 * rng.normal(),
                                                   0.1 * rng.normal());
        }
      }
    }

    RealMatrix x = random_matrix(config.block.n_tokens, config.block.channels, rng);
    RealMatrix r = random_matrix(config.block.n_tokens, config.block.channels, rng);

    BlockForward fwd = sieformer_block_forward(x, config.block, params);
    params.zero_grads();
    block_backward(fwd, r, params);

    if (!config.corrupt.empty()) {
      auto poison = [](auto& grad) { grad(0, 0) += 1.0; };
      if (config.corrupt == "w_q") poison(params.w_q.grad);
      else if (config.corrupt == "w_k") poison(params.w_k.grad);
      else if (config.corrupt == "w_v") poison(params.w_v.grad);
      else if (config.corrupt == "w_z") poison(params.w_z.grad);
      else if (config.corrupt == "w_p") poison(params.w_p.grad);
      else if (config.corrupt == "w_r") poison(params.w_r.grad);
      else if (config.corrupt == "w_b" && config.block.bias_ablation)
        poison(params.w_b.grad);
      else if (config.corrupt == "w_c") poison(params.w_c.front().grad);
      else throw ConfigError("grad-check: unknown corrupt target '" +
                             config.corrupt + "'");
    }

    auto compare = [&](GradCheckReport::Entry& entry, double analytic, double fd) {
      double scale = std::max(std::abs(analytic), std::abs(fd));
      if (scale <= kGradSignalFloor) return;
      ++entry.checked;
      entry.max_rel_error =
          std::max(entry.max_rel_error, std::abs(analytic - fd) / scale);
    };

    auto check_real = [&](const std::string& name, Param<RealMatrix>& p) {
      if (p.value.empty()) return;
      GradCheckReport::Entry& entry = entry_for(name);
      for (std::size_t i = 0; i < p.value.rows(); ++i) {
        for (std::size_t j = 0; j < p.value.cols(); ++j) {
          double saved = p.value(i, j);
          p.value(i, j) = saved + h;
          double lp = probe_loss(x, config.block, params, r);
          p.value(i, j) = saved - h;
          double lm = probe_loss(x, config.block, params, r);
          p.value(i, j) = saved;
          compare(entry, p.grad(i, j), (lp - lm) / (2.0 * h));
        }
      }
    };

    check_real("w_q", params.w_q);
    check_real("w_k", params.w_k);
    check_real("w_v", params.w_v);
    check_real("w_z", params.w_z);
    check_real("w_p", params.w_p);
    check_real("w_r", params.w_r);
    if (config.block.bias_ablation) check_real("w_b", params.w_b);

    GradCheckReport::Entry& mask_entry = entry_for("w_c");
    for (auto& mask : params.w_c) {
      for (std::size_t i = 0; i < mask.value.rows(); ++i) {
        for (std::size_t j = 0; j < mask.value.cols(); ++j) {
          std::complex<double> saved = mask.value(i, j);
          mask.value(i, j) = saved + std::complex<double>(h, 0.0);
          double lp = probe_loss(x, config.block, params, r);
          mask.value(i, j) = saved - std::complex<double>(h, 0.0);
          double lm = probe_loss(x, config.block, params, r);
          compare(mask_entry, mask.grad(i, j).real(), (lp - lm) / (2.0 * h));
          mask.value(i, j) = saved + std::complex<double>(0.0, h);
          lp = probe_loss(x, config.block, params, r);
          mask.value(i, j) = saved - std::complex<double>(0.0, h);
          lm = probe_loss(x, config.block, params, r);
          mask.value(i, j) = saved;
          compare(mask_entry, mask.grad(i, j).imag(), (lp - lm) / (2.0 * h));
        }
      }
    }
  }

  report.pass = true;
  for (auto& entry : report.entries) {
    entry.pass = entry.max_rel_error < config.rel_tol && entry.checked > 0;
    report.pass = report.pass && entry.pass;
  }
  return report;
}

std::string GradCheckReport::to_json() const {
  json doc;
  doc["rel_tol"] = rel_tol;
  doc["pass"] = pass;
  json params = json::object();
  for (const auto& entry : entries) {
    params[entry.param] = {{"max_rel_error", entry.max_rel_error},
                           {"checked", entry.checked},
                           {"pass", entry.pass}};
  }
  doc["params"] = params;
  return doc.dump(2) + "\n";
}

// ---- equivalence ----------------------------------------------------------------

EquivalenceConfig EquivalenceConfig::from_config(const KvConfig& kv) {
  kv.require_known_keys("equivalence", {"trials", "init_trials", "n_max", "baf_tol",
                                        "bound_slack", "init_tol", "seed"});
  EquivalenceConfig config;
  const char* s = "equivalence";
  config.trials = kv.get_u64_or(s, "trials", config.trials);
  config.init_trials = kv.get_u64_or(s, "init_trials", config.init_trials);
  config.n_max = kv.get_u64_or(s, "n_max", config.n_max);
  config.baf_tol = kv.get_double_or(s, "baf_tol", config.baf_tol);
  config.bound_slack = kv.get_double_or(s, "bound_slack", config.bound_slack);
  config.init_tol = kv.get_double_or(s, "init_tol", config.init_tol);
  config.seed = kv.get_u64_or(s, "seed", config.seed);
  return config;
}

EquivalenceReport run_equivalence(const EquivalenceConfig& config) {
  if (config.trials == 0 || config.init_trials == 0 || config.n_max < 2) {
    throw ConfigError("equivalence: trials/init_trials >= 1 and n_max >= 2 required");
  }

  EquivalenceReport report;
  report.trials = config.trials;
  report.eigenvalue_min = std::numeric_limits<double>::infinity();
  report.eigenvalue_max = -std::numeric_limits<double>::infinity();

  Rng rng = Rng(config.seed).stream(0x65717569ULL);
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    std::size_t n = 2 + rng.uniform_int(config.n_max - 1);
    std::size_t embed = 2 + rng.uniform_int(7);
    RealMatrix q = random_matrix(n, embed, rng);
    RealMatrix k = random_matrix(n, embed, rng);
    RealMatrix affinity =
        build_affinity(q, k, std::sqrt(static_cast<double>(embed)));
    AffinityKernel kernel = build_kernel(affinity, kDegreeEpsilon);

    SpectralBasis basis = jacobi_eigh(kernel.laplacian);
    report.eigenvalue_min = std::min(report.eigenvalue_min, basis.values.front());
    report.eigenvalue_max = std::max(report.eigenvalue_max, basis.values.back());

    // Direct polynomial route vs the eigenbasis route with the paired
    // responses mu^2 and mu^2 - 1 on adjacency eigenvalues mu = 1 - lambda.
    RealMatrix v = random_matrix(n, embed, rng);
    RealMatrix w_p = random_matrix(embed, embed, rng);
    RealMatrix w_r = random_matrix(embed, embed, rng);
    RealMatrix direct = baf_apply(kernel, v, w_p, w_r);
    RealMatrix spectral =
        apply_spectral_filter(matmul(v, w_p), basis,
                              [](double lam) { return (1.0 - lam) * (1.0 - lam); }) +
        apply_spectral_filter(matmul(v, w_r), basis, [](double lam) {
          return (1.0 - lam) * (1.0 - lam) - 1.0;
        });
    report.baf_max_deviation =
        std::max(report.baf_max_deviation, max_abs_diff(direct, spectral));
  }

  for (std::size_t trial = 0; trial < config.init_trials; ++trial) {
    BlockConfig block;
    block.heads = 1 + rng.uniform_int(3);
    block.embed = block.heads * (1 + rng.uniform_int(4));
    block.n_tokens = 2 + rng.uniform_int(9);
    block.channels = 2 + rng.uniform_int(7);
    Rng init_rng = rng.stream(trial + 1);
    BlockParams params = init_block_params(block, init_rng);
    RealMatrix x = random_matrix(block.n_tokens, block.channels, rng);
    BlockForward filtered = sieformer_block_forward(x, block, params);
    BlockForward plain = baseline_block_forward(x, block, params);
    report.init_max_deviation = std::max(
        report.init_max_deviation, max_abs_diff(filtered.y(), plain.y()));
  }

  // Two-token path graph: adjacency eigenvalues +-1, Laplacian {0, 2}.
  RealMatrix path{{0.0, 1.0}, {1.0, 0.0}};
  SpectralBasis path_basis = jacobi_eigh(build_kernel(path, kDegreeEpsilon).laplacian);
  report.path2_eigenvalues = {path_basis.values[0], path_basis.values[1]};

  report.bounds_pass = report.eigenvalue_min >= -config.bound_slack &&
                       report.eigenvalue_max <= 2.0 + config.bound_slack;
  report.baf_pass = report.baf_max_deviation < config.baf_tol;
  report.init_pass = report.init_max_deviation < config.init_tol;
  report.pass = report.bounds_pass && report.baf_pass && report.init_pass;
  return report;
}

std::string EquivalenceReport::to_json() const {
  json doc;
  doc["trials"] = trials;
  doc["eigenvalue_min"] = eigenvalue_min;
  doc["eigenvalue_max"] = eigenvalue_max;
  doc["baf_max_deviation"] = baf_max_deviation;
  doc["init_max_deviation"] = init_max_deviation;
  doc["path2_laplacian_eigenvalues"] = {path2_eigenvalues[0], path2_eigenvalues[1]};
  doc["bounds_pass"] = bounds_pass;
  doc["baf_pass"] = baf_pass;
  doc["init_pass"] = init_pass;
  doc["pass"] = pass;
  return doc.dump(2) + "\n";
}

// ---- filter-response ---------------------------------------------------------------

FilterResponseConfig FilterResponseConfig::from_config(const KvConfig& kv) {
  kv.require_known_keys("filter-response",
                        {"filter", "gain", "balance", "alpha", "beta", "tau", "theta",
                         "lambda_max", "w1", "w2", "wh2"});
  FilterResponseConfig config;
  const char* s = "filter-response";
  config.filter = kv.get_string_or(s, "filter", config.filter);
  config.gain = kv.get_double_or(s, "gain", config.gain);
  config.balance = kv.get_double_or(s, "balance", config.balance);
  config.alpha = kv.get_double_or(s, "alpha", config.alpha);
  config.beta = kv.get_double_or(s, "beta", config.beta);
  config.tau = kv.get_double_or(s, "tau", config.tau);
  config.lambda_max = kv.get_double_or(s, "lambda_max", config.lambda_max);
  config.w1 = kv.get_double_or(s, "w1", config.w1);
  config.w2 = kv.get_double_or(s, "w2", config.w2);
  config.wh2 = kv.get_double_or(s, "wh2", config.wh2);
  if (kv.has(s, "theta")) {
    config.theta.clear();
    std::string raw = kv.get_string(s, "theta");
    std::size_t pos = 0;
    while (pos <= raw.size()) {
      std::size_t comma = raw.find(',', pos);
      std::string piece = raw.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      char* end = nullptr;
      double v = std::strtod(piece.c_str(), &end);
      if (piece.empty() || end != piece.c_str() + piece.size() || !std::isfinite(v)) {
        throw ConfigError("[filter-response] theta: expected comma-separated numbers");
      }
      config.theta.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return config;
}

FilterSpec FilterResponseConfig::to_spec() const {
  if (filter == "allpass") return AllPassFilter{};
  if (filter == "low") return LowPassFilter{gain, balance};
  if (filter == "high") return HighPassFilter{gain, balance};
  if (filter == "band_reject") {
    return BandAdaptiveFilter{RealMatrix{{1.0}}, RealMatrix{{0.0}}};
  }
  if (filter == "band_pass") {
    return BandAdaptiveFilter{RealMatrix{{0.0}}, RealMatrix{{1.0}}};
  }
  if (filter == "chebyshev") return ChebyshevFilter{theta, lambda_max};
  if (filter == "arma") {
    return Arma1Filter{RealMatrix{{alpha}}, RealMatrix{{beta}}, RealMatrix{{tau}}, 1};
  }
  if (filter == "cayley") {
    return CayleyFilter{RealMatrix{{w1}}, RealMatrix{{w2}}, RealMatrix{{wh2}}};
  }
  throw ConfigError("unknown filter name '" + filter +
                    "' (expected allpass, low, high, band_pass, band_reject, "
                    "chebyshev, arma, or cayley)");
}

std::string run_filter_response(const FilterResponseConfig& config) {
  return response_csv(config.to_spec());
}

// ---- run-gcd --------------------------------------------------------------------

RunGcdConfig RunGcdConfig::from_config(const KvConfig& kv) {
  kv.require_known_keys(
      "run-gcd",
      {"n_tokens", "channels", "classes", "samples_per_class", "separation", "noise",
       "labeled_class_fraction", "labeled_instance_fraction", "embed", "heads",
       "variant", "kmeans_iters", "seed", "checkpoint_out", "steps", "batch", "lr",
       "lambda_sup", "tau_u", "tau_c", "tau_s", "tau_t_start", "tau_t_end",
       "tau_t_warmup_epochs", "me_max_weight", "aug_noise", "aug_jitter"});
  RunGcdConfig config;
  const char* s = "run-gcd";
  config.data.n_tokens = kv.get_u64_or(s, "n_tokens", config.data.n_tokens);
  config.data.channels = kv.get_u64_or(s, "channels", config.data.channels);
  config.data.num_classes = static_cast<int>(
      kv.get_u64_or(s, "classes", static_cast<std::uint64_t>(config.data.num_classes)));
  config.data.samples_per_class =
      kv.get_u64_or(s, "samples_per_class", config.data.samples_per_class);
  config.data.separation = kv.get_double_or(s, "separation", config.data.separation);
  config.data.noise = kv.get_double_or(s, "noise", config.data.noise);
  config.labeled_class_fraction =
      kv.get_double_or(s, "labeled_class_fraction", config.labeled_class_fraction);
  config.labeled_instance_fraction = kv.get_double_or(
      s, "labeled_instance_fraction", config.labeled_instance_fraction);
  config.embed = kv.get_u64_or(s, "embed", config.embed);
  config.heads = kv.get_u64_or(s, "heads", config.heads);
  config.variant = kv.get_string_or(s, "variant", config.variant);
  config.kmeans_iters = kv.get_u64_or(s, "kmeans_iters", config.kmeans_iters);
  config.seed = kv.get_u64_or(s, "seed", config.seed);
  config.checkpoint_out = kv.get_string_or(s, "checkpoint_out", config.checkpoint_out);
  config.train.steps = kv.get_u64_or(s, "steps", config.train.steps);
  config.train.batch = kv.get_u64_or(s, "batch", config.train.batch);
  config.train.lr = kv.get_double_or(s, "lr", config.train.lr);
  config.train.lambda_sup = kv.get_double_or(s, "lambda_sup", config.train.lambda_sup);
  config.train.tau_u = kv.get_double_or(s, "tau_u", config.train.tau_u);
  config.train.tau_c = kv.get_double_or(s, "tau_c", config.train.tau_c);
  config.train.tau_s = kv.get_double_or(s, "tau_s", config.train.tau_s);
  config.train.tau_t_start =
      kv.get_double_or(s, "tau_t_start", config.train.tau_t_start);
  config.train.tau_t_end = kv.get_double_or(s, "tau_t_end", config.train.tau_t_end);
  config.train.tau_t_warmup_epochs =
      kv.get_u64_or(s, "tau_t_warmup_epochs", config.train.tau_t_warmup_epochs);
  config.train.me_max_weight =
      kv.get_double_or(s, "me_max_weight", config.train.me_max_weight);
  config.train.aug_noise = kv.get_double_or(s, "aug_noise", config.train.aug_noise);
  config.train.aug_jitter = kv.get_double_or(s, "aug_jitter", config.train.aug_jitter);
  return config;
}

BlockConfig RunGcdConfig::block_config() const {
  BlockConfig block;
  block.n_tokens = data.n_tokens;
  block.channels = data.channels;
  block.embed = embed;
  block.heads = heads;
  return block;
}

namespace {

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty set");
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

VarianceReport filter_variance(const GCDDataset& dataset, const BlockConfig& block,
                               const BlockParams& params) {
  std::vector<RealMatrix> raw;
  std::vector<RealMatrix> filtered;
  raw.reserve(dataset.size());
  filtered.reserve(dataset.size());
  for (const RealMatrix& x : dataset.samples) {
    BlockForward fwd = sieformer_block_forward(x, block, params);
    raw.push_back(fwd.tape.value(fwd.values_flat));
    filtered.push_back(fwd.tape.value(fwd.filter_out));
  }
  return variance_report(raw, filtered, dataset.labels);
}

json metrics_json(const Metrics& metrics) {
  json doc;
  doc["all"] = metrics.acc_all;
  doc["old"] = metrics.acc_old;
  doc["new"] = metrics.acc_new;
  json assignment = json::array();
  for (std::ptrdiff_t col : metrics.assignment.row_to_col) assignment.push_back(col);
  doc["assignment"] = assignment;
  return doc;
}

}  // namespace

RunGcdReport run_gcd(const RunGcdConfig& config) {
  BlockConfig block = config.block_config();
  block.validate();
  config.train.validate();
  if (config.kmeans_iters == 0) {
    throw ConfigError("run-gcd: kmeans_iters must be >= 1");
  }
  std::vector<BlockVariant> variants;
  if (config.variant == "both") {
    variants = {BlockVariant::kBaseline, BlockVariant::kSieformer};
  } else {
    variants = {variant_from_name(config.variant)};
  }

  Rng root(config.seed);
  std::uint64_t data_seed = root.stream(0x64617461ULL).next_u64();
  std::uint64_t split_seed = root.stream(0x73706c69ULL).next_u64();
  GCDDataset dataset = make_synthetic(config.data, data_seed);
  split_gcd(dataset, config.labeled_class_fraction, config.labeled_instance_fraction,
            split_seed);

  TrainConfig train = config.train;
  train.seed = root.stream(0x74726e00ULL).next_u64();

  RunGcdReport report;
  report.seed = config.seed;
  report.config = config;
  for (BlockVariant variant : variants) {
    TrainResult trained = train_loop(dataset, block, variant, train);
    VariantOutcome outcome;
    outcome.name = variant_name(variant);
    outcome.metrics = trained.final_metrics;
    outcome.history = trained.history;
    outcome.final_mean_loss = trained.history.back().mean_loss;
    if (variant == BlockVariant::kSieformer) {
      outcome.variance = filter_variance(dataset, block, trained.params);
      std::vector<double> ratios;
      for (const auto& entry : outcome.variance.per_class) {
        ratios.push_back(entry.ratio);
      }
      outcome.median_variance_ratio = median(ratios);
      outcome.has_variance = true;
    }
    if (!config.checkpoint_out.empty()) {
      save_tensors(config.checkpoint_out + "." + outcome.name + ".ckpt",
                   pack_block_params(block, trained.params));
    }
    report.variants.push_back(std::move(outcome));
  }
  return report;
}

const VariantOutcome& RunGcdReport::outcome(const std::string& name) const {
  for (const auto& v : variants) {
    if (v.name == name) return v;
  }
  throw StateError("run-gcd report has no variant '" + name + "'");
}

std::string RunGcdReport::to_json() const {
  json doc;
  doc["seed"] = seed;

  json cfg;
  cfg["n_tokens"] = config.data.n_tokens;
  cfg["channels"] = config.data.channels;
  cfg["classes"] = config.data.num_classes;
  cfg["samples_per_class"] = config.data.samples_per_class;
  cfg["separation"] = config.data.separation;
  cfg["noise"] = config.data.noise;
  cfg["labeled_class_fraction"] = config.labeled_class_fraction;
  cfg["labeled_instance_fraction"] = config.labeled_instance_fraction;
  cfg["embed"] = config.embed;
  cfg["heads"] = config.heads;
  cfg["variant"] = config.variant;
  cfg["kmeans_iters"] = config.kmeans_iters;
  cfg["steps"] = config.train.steps;
  cfg["batch"] = config.train.batch;
  cfg["lr"] = config.train.lr;
  cfg["lambda_sup"] = config.train.lambda_sup;
  cfg["tau_u"] = config.train.tau_u;
  cfg["tau_c"] = config.train.tau_c;
  cfg["aug_noise"] = config.train.aug_noise;
  cfg["aug_jitter"] = config.train.aug_jitter;
  doc["config"] = cfg;

  json vars = json::object();
  for (const auto& v : variants) {
    json entry = metrics_json(v.metrics);
    entry["final_loss"] = v.final_mean_loss;
    json epochs = json::array();
    for (const auto& rec : v.history) {
      epochs.push_back({{"epoch", rec.epoch},
                        {"step", rec.step},
                        {"mean_loss", rec.mean_loss},
                        {"all", rec.metrics.acc_all},
                        {"old", rec.metrics.acc_old},
                        {"new", rec.metrics.acc_new}});
    }
    entry["epochs"] = epochs;
    if (v.has_variance) {
      json variance;
      json per_class = json::array();
      for (const auto& c : v.variance.per_class) {
        per_class.push_back({{"class", c.class_id},
                             {"samples", c.samples},
                             {"raw", c.raw_variance},
                             {"filtered", c.filtered_variance},
                             {"ratio", c.ratio}});
      }
      variance["per_class"] = per_class;
      variance["skipped_classes"] = v.variance.skipped_classes;
      variance["overall_ratio"] = v.variance.overall_ratio;
      variance["median_ratio"] = v.median_variance_ratio;
      entry["variance"] = variance;
    }
    vars[v.name] = entry;
  }
  doc["variants"] = vars;
  return doc.dump(2) + "\n";
}

}  // namespace sieformer
