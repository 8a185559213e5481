// Command-line harness: gradient checks, spectral equivalence checks,
// scalar filter response tables, and end-to-end synthetic category
// discovery runs. Exit codes: 0 success, 1 check or experiment failure,
// 2 usage/config error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sieformer/error.hpp"
#include "sieformer/experiments.hpp"
#include "sieformer/kvconfig.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

void add_common_options(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path,
                  "Key-value config file (section [" + std::string(cmd->get_name()) +
                      "])")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", options.seed, "Override the config seed");
  cmd->add_option("--out", options.out_path,
                  "Output file (default: standard output)");
}

sieformer::KvConfig load_config(const CommonOptions& options,
                                const std::string& section) {
  sieformer::KvConfig kv;
  if (!options.config_path.empty()) {
    kv = sieformer::KvConfig::load(options.config_path);
    kv.require_known_sections(
        {"grad-check", "equivalence", "filter-response", "run-gcd"});
  }
  if (options.seed) kv.set(section, "seed", std::to_string(*options.seed));
  return kv;
}

// Writes to --out when given; stdout otherwise.
void emit(const CommonOptions& options, const std::string& payload) {
  if (options.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(options.out_path, std::ios::binary);
  if (!out) throw sieformer::IoError("cannot open output file: " + options.out_path);
  out << payload;
  if (!out) throw sieformer::IoError("failed writing output file: " + options.out_path);
}

int cmd_grad_check(const CommonOptions& options) {
  sieformer::GradCheckConfig config =
      sieformer::GradCheckConfig::from_config(load_config(options, "grad-check"));
  sieformer::GradCheckReport report = sieformer::run_grad_check(config);
  emit(options, report.to_json());
  if (!report.pass) {
    for (const auto& entry : report.entries) {
      if (!entry.pass) {
        std::cerr << "grad-check: FAIL " << entry.param << " (max rel error "
                  << entry.max_rel_error << ")\n";
      }
    }
    return kExitFailure;
  }
  std::cerr << "grad-check: PASS\n";
  return kExitSuccess;
}

int cmd_equivalence(const CommonOptions& options) {
  sieformer::EquivalenceConfig config =
      sieformer::EquivalenceConfig::from_config(load_config(options, "equivalence"));
  sieformer::EquivalenceReport report = sieformer::run_equivalence(config);
  emit(options, report.to_json());
  std::cerr << "equivalence: " << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kExitSuccess : kExitFailure;
}

int cmd_filter_response(const CommonOptions& options) {
  sieformer::FilterResponseConfig config = sieformer::FilterResponseConfig::from_config(
      load_config(options, "filter-response"));
  emit(options, sieformer::run_filter_response(config));
  return kExitSuccess;
}

int cmd_run_gcd(const CommonOptions& options) {
  sieformer::RunGcdConfig config =
      sieformer::RunGcdConfig::from_config(load_config(options, "run-gcd"));
  if (config.checkpoint_out.empty() && !options.out_path.empty()) {
    config.checkpoint_out = options.out_path;
  }
  sieformer::RunGcdReport report = sieformer::run_gcd(config);
  emit(options, report.to_json());
  for (const auto& variant : report.variants) {
    std::cerr << "run-gcd " << variant.name << ": all=" << variant.metrics.acc_all
              << " old=" << variant.metrics.acc_old
              << " new=" << variant.metrics.acc_new << "\n";
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-filtered attention toolkit"};
  app.require_subcommand(1);

  CommonOptions grad_options, equiv_options, filter_options, gcd_options;
  CLI::App* grad =
      app.add_subcommand("grad-check", "Check analytic gradients against "
                                       "central finite differences");
  add_common_options(grad, grad_options);
  CLI::App* equiv = app.add_subcommand(
      "equivalence", "Verify spectral bounds, filter duality, and the "
                     "pass-through initialization");
  add_common_options(equiv, equiv_options);
  CLI::App* filter = app.add_subcommand(
      "filter-response", "Dump a scalar filter frequency response as CSV");
  add_common_options(filter, filter_options);
  CLI::App* gcd = app.add_subcommand(
      "run-gcd", "Train and evaluate block variants on a synthetic "
                 "category-discovery task");
  add_common_options(gcd, gcd_options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (grad->parsed()) return cmd_grad_check(grad_options);
    if (equiv->parsed()) return cmd_equivalence(equiv_options);
    if (filter->parsed()) return cmd_filter_response(filter_options);
    if (gcd->parsed()) return cmd_run_gcd(gcd_options);
  } catch (const std::invalid_argument& e) {
    // Config/dimension/contract problems are usage errors.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
