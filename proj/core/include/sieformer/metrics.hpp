#pragma once

#include <cstddef>
#include <vector>

#include "sieformer/assignment.hpp"
#include "sieformer/matrix.hpp"

namespace sieformer {

// Accuracy of a clustering against ground truth after one global
// cluster-to-class matching.
struct Metrics {
  double acc_all = 0.0;
  double acc_old = 0.0;  // over instances whose true class is in old_classes
  double acc_new = 0.0;  // over the remaining instances
  Assignment assignment;  // cluster index -> class index (compacted ids)
};

// Matches clusters to classes once, maximizing total agreement over all
// instances, then scores every subgroup under that single matching.
// An empty subgroup reports accuracy 0 (it carries zero weight in acc_all).
Metrics cluster_accuracy(const std::vector<std::size_t>& pred,
                         const std::vector<int>& gt,
                         const std::vector<int>& old_classes);

// Within-class scatter of filtered features relative to raw features.
// Scatter of a class is the mean squared Frobenius deviation from the class
// mean; classes with fewer than 2 samples cannot define one and are skipped.
struct VarianceReport {
  struct ClassRatio {
    int class_id = 0;
    std::size_t samples = 0;
    double raw_variance = 0.0;
    double filtered_variance = 0.0;
    double ratio = 0.0;  // filtered / raw; 1 when both are zero
  };
  std::vector<ClassRatio> per_class;
  std::vector<int> skipped_classes;  // classes with < 2 samples
  double overall_raw = 0.0;       // total within-class scatter, raw
  double overall_filtered = 0.0;  // total within-class scatter, filtered
  double overall_ratio = 0.0;
};

VarianceReport variance_report(const std::vector<RealMatrix>& raw_values,
                               const std::vector<RealMatrix>& filtered_values,
                               const std::vector<int>& labels);

}  // namespace sieformer
