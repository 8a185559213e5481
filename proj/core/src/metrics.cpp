#include "sieformer/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "sieformer/error.hpp"

namespace sieformer {

Metrics cluster_accuracy(const std::vector<std::size_t>& pred,
                         const std::vector<int>& gt,
                         const std::vector<int>& old_classes) {
  if (pred.size() != gt.size()) {
    throw DimensionError("cluster_accuracy: pred/gt lengths differ");
  }
  if (pred.empty()) {
    throw DimensionError("cluster_accuracy: no instances");
  }

  // Compact both id spaces so the contingency table stays dense.
  std::map<std::size_t, std::size_t> cluster_index;
  std::map<int, std::size_t> class_index;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    cluster_index.emplace(pred[i], cluster_index.size());
    class_index.emplace(gt[i], class_index.size());
  }
  std::size_t clusters = cluster_index.size();
  std::size_t classes = class_index.size();

  RealMatrix counts(clusters, classes);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    counts(cluster_index.at(pred[i]), class_index.at(gt[i])) += 1.0;
  }

  // Minimizing negated counts maximizes total agreement.
  Metrics metrics;
  metrics.assignment = hungarian(-1.0 * counts);

  // cluster -> matched class id (original label space), -1 when unmatched.
  std::vector<int> cluster_to_class(clusters, -1);
  std::vector<int> class_ids(classes);
  for (const auto& [id, idx] : class_index) class_ids[idx] = id;
  for (std::size_t c = 0; c < clusters; ++c) {
    std::ptrdiff_t col = metrics.assignment.row_to_col[c];
    if (col >= 0) cluster_to_class[c] = class_ids[static_cast<std::size_t>(col)];
  }

  std::vector<char> is_old_class(classes, 0);
  for (int id : old_classes) {
    auto it = class_index.find(id);
    if (it != class_index.end()) is_old_class[it->second] = 1;
  }

  std::size_t hit_old = 0, hit_new = 0, n_old = 0, n_new = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    bool old_instance = is_old_class[class_index.at(gt[i])] != 0;
    bool hit = cluster_to_class[cluster_index.at(pred[i])] == gt[i];
    if (old_instance) {
      ++n_old;
      hit_old += hit ? 1 : 0;
    } else {
      ++n_new;
      hit_new += hit ? 1 : 0;
    }
  }
  metrics.acc_all = static_cast<double>(hit_old + hit_new) /
                    static_cast<double>(pred.size());
  metrics.acc_old = n_old ? static_cast<double>(hit_old) / static_cast<double>(n_old)
                          : 0.0;
  metrics.acc_new = n_new ? static_cast<double>(hit_new) / static_cast<double>(n_new)
                          : 0.0;
  return metrics;
}

namespace {

// Mean squared Frobenius deviation from the subset's mean.
double scatter(const std::vector<RealMatrix>& values,
               const std::vector<std::size_t>& subset) {
  const RealMatrix& first = values[subset.front()];
  RealMatrix mean(first.rows(), first.cols());
  for (std::size_t s : subset) {
    if (!values[s].same_shape(first)) {
      throw DimensionError("variance_report: samples have mixed shapes");
    }
    mean += values[s];
  }
  mean *= 1.0 / static_cast<double>(subset.size());
  double total = 0.0;
  for (std::size_t s : subset) {
    double d = frobenius_norm(values[s] - mean);
    total += d * d;
  }
  return total / static_cast<double>(subset.size());
}

double safe_ratio(double filtered, double raw) {
  if (raw > 0.0) return filtered / raw;
  return filtered == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

VarianceReport variance_report(const std::vector<RealMatrix>& raw_values,
                               const std::vector<RealMatrix>& filtered_values,
                               const std::vector<int>& labels) {
  if (raw_values.size() != filtered_values.size() ||
      raw_values.size() != labels.size()) {
    throw DimensionError("variance_report: sample counts differ");
  }
  if (raw_values.empty()) {
    throw DimensionError("variance_report: no samples");
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  VarianceReport report;
  double raw_total = 0.0;
  double filtered_total = 0.0;
  for (const auto& [class_id, members] : by_class) {
    if (members.size() < 2) {
      report.skipped_classes.push_back(class_id);
      continue;
    }
    VarianceReport::ClassRatio entry;
    entry.class_id = class_id;
    entry.samples = members.size();
    entry.raw_variance = scatter(raw_values, members);
    entry.filtered_variance = scatter(filtered_values, members);
    entry.ratio = safe_ratio(entry.filtered_variance, entry.raw_variance);
    raw_total += entry.raw_variance * static_cast<double>(members.size());
    filtered_total += entry.filtered_variance * static_cast<double>(members.size());
    report.per_class.push_back(entry);
  }
  if (report.per_class.empty()) {
    throw ContractError("variance_report: every class has < 2 samples");
  }
  report.overall_raw = raw_total;
  report.overall_filtered = filtered_total;
  report.overall_ratio = safe_ratio(filtered_total, raw_total);
  return report;
}

}  // namespace sieformer
