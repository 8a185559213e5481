#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

// Category-discovery dataset: token matrices with ground-truth classes, a
// labeled subset, and the set of "old" (partially labeled) classes. The
// labeled classes are always a subset of all classes.
struct GCDDataset {
  std::vector<RealMatrix> samples;  // each n_tokens x channels
  std::vector<int> labels;          // ground truth, 0..num_classes-1
  std::vector<char> is_labeled;     // per-sample supervision flag
  std::vector<int> old_classes;     // sorted ids of classes with labels
  int num_classes = 0;

  std::size_t size() const { return samples.size(); }
  std::size_t labeled_count() const;
  bool is_old_class(int label) const;
};

// Geometry of the synthetic token clusters. Class prototypes are
// row-replicated unit vectors rescaled so every pair of prototypes sits at
// Frobenius distance >= separation; samples add i.i.d. Gaussian noise.
struct SyntheticSpec {
  std::size_t n_tokens = 8;
  std::size_t channels = 16;
  int num_classes = 10;
  std::size_t samples_per_class = 200;
  double separation = 6.0;
  double noise = 0.1;
};

GCDDataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                          std::vector<RealMatrix>* prototypes_out = nullptr);

// Marks ceil(labeled_class_fraction * K) classes (chosen by a seeded
// shuffle) as old, then labels round(labeled_instance_fraction * count)
// instances inside each old class. Rejects a split that leaves no
// unlabeled samples.
void split_gcd(GCDDataset& dataset, double labeled_class_fraction,
               double labeled_instance_fraction, std::uint64_t seed);

// CSV manifest (sample_id,class,labeled) plus the binary tensor container
// for payloads. Round-trips are exact.
void export_dataset(const GCDDataset& dataset, const std::string& csv_path,
                    const std::string& bin_path);
GCDDataset import_dataset(const std::string& csv_path, const std::string& bin_path);

}  // namespace sieformer
