#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sieformer/block.hpp"
#include "sieformer/dataset.hpp"
#include "sieformer/filters.hpp"
#include "sieformer/kvconfig.hpp"
#include "sieformer/metrics.hpp"
#include "sieformer/train.hpp"

namespace sieformer {

// Shared implementations of the command-line experiments. Every run_* is a
// deterministic function of its config; reports serialize to stable JSON
// (sorted keys, shortest-round-trip numbers) so repeat runs are
// byte-identical.

// ---- gradient verification --------------------------------------------------

struct GradCheckConfig {
  BlockConfig block{4, 6, 6, 2, /*bias_ablation=*/true};
  std::size_t trials = 2;  // random (input, parameter) draws per run
  double fd_step = 1e-5;
  double rel_tol = 1e-4;
  std::uint64_t seed = 1;
  std::string corrupt;  // negative-control hook: parameter name to corrupt

  static GradCheckConfig from_config(const KvConfig& kv);  // [grad-check]
};

struct GradCheckReport {
  struct Entry {
    std::string param;
    double max_rel_error = 0.0;
    std::size_t checked = 0;  // entries with gradient signal above the floor
    bool pass = true;
  };
  std::vector<Entry> entries;
  double rel_tol = 0.0;
  bool pass = true;

  std::string to_json() const;
};

// Compares analytic block gradients against central finite differences on
// every learnable parameter (complex masks componentwise).
GradCheckReport run_grad_check(const GradCheckConfig& config);

// ---- spectral equivalences ----------------------------------------------------

struct EquivalenceConfig {
  std::size_t trials = 100;      // kernel-bound and duality draws
  std::size_t init_trials = 50;  // pass-through initialization inputs
  std::size_t n_max = 16;
  double baf_tol = 1e-8;
  double bound_slack = 1e-9;
  double init_tol = 1e-10;
  std::uint64_t seed = 1;

  static EquivalenceConfig from_config(const KvConfig& kv);  // [equivalence]
};

struct EquivalenceReport {
  std::size_t trials = 0;
  double eigenvalue_min = 0.0;  // over all kernel Laplacian spectra
  double eigenvalue_max = 0.0;
  double baf_max_deviation = 0.0;   // direct route vs eigenbasis route
  double init_max_deviation = 0.0;  // filtered block vs plain block at init
  std::array<double, 2> path2_eigenvalues{};  // two-token path graph
  bool bounds_pass = true;
  bool baf_pass = true;
  bool init_pass = true;
  bool pass = true;

  std::string to_json() const;
};

EquivalenceReport run_equivalence(const EquivalenceConfig& config);

// ---- scalar filter responses ---------------------------------------------------

struct FilterResponseConfig {
  std::string filter = "band_reject";
  double gain = 1.0;      // low / high
  double balance = 0.5;
  double alpha = 0.3;     // rational filter scalars
  double beta = 1.0;
  double tau = 1.0;
  std::vector<double> theta = {0.0, 1.0};  // polynomial coefficients
  double lambda_max = 2.0;
  double w1 = 0.0;        // quadratic rational scalars
  double w2 = 0.5;
  double wh2 = 1.0;

  static FilterResponseConfig from_config(const KvConfig& kv);  // [filter-response]
  FilterSpec to_spec() const;  // throws ConfigError on an unknown name
};

// CSV text: axis-named header plus 201 sampled rows.
std::string run_filter_response(const FilterResponseConfig& config);

// ---- end-to-end category discovery ---------------------------------------------

struct RunGcdConfig {
  SyntheticSpec data;  // defaults: 10 classes x 200, 8x16 tokens
  double labeled_class_fraction = 0.5;
  double labeled_instance_fraction = 0.5;
  std::size_t embed = 16;
  std::size_t heads = 2;
  TrainConfig train;
  std::string variant = "both";  // baseline | sieformer | both
  std::size_t kmeans_iters = 100;
  std::uint64_t seed = 0;        // drives dataset, split, and training
  std::string checkpoint_out;    // optional path stem for trained parameters

  static RunGcdConfig from_config(const KvConfig& kv);  // [run-gcd]
  BlockConfig block_config() const;
};

struct VariantOutcome {
  std::string name;
  Metrics metrics;
  double final_mean_loss = 0.0;
  std::vector<EpochRecord> history;
  bool has_variance = false;  // filter-branch variants only
  VarianceReport variance;
  double median_variance_ratio = 0.0;
};

struct RunGcdReport {
  std::uint64_t seed = 0;
  RunGcdConfig config;  // resolved settings, echoed into the JSON
  std::vector<VariantOutcome> variants;

  const VariantOutcome& outcome(const std::string& name) const;
  std::string to_json() const;
};

RunGcdReport run_gcd(const RunGcdConfig& config);

}  // namespace sieformer
