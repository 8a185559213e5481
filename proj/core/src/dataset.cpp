#include "sieformer/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sieformer/checkpoint.hpp"
#include "sieformer/error.hpp"
#include "sieformer/rng.hpp"

namespace sieformer {

std::size_t GCDDataset::labeled_count() const {
  std::size_t n = 0;
  for (const char f : is_labeled) n += f != 0;
  return n;
}

bool GCDDataset::is_old_class(int label) const {
  return std::binary_search(old_classes.begin(), old_classes.end(), label);
}

GCDDataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                          std::vector<RealMatrix>* prototypes_out) {
  if (spec.num_classes < 2) throw ConfigError("make_synthetic: need at least 2 classes");
  if (spec.samples_per_class < 2)
    throw ConfigError("make_synthetic: need at least 2 samples per class");
  if (spec.n_tokens == 0 || spec.channels == 0)
    throw ConfigError("make_synthetic: token and channel counts must be positive");
  if (!(spec.separation > 0.0)) throw ConfigError("make_synthetic: separation must be positive");
  if (spec.noise < 0.0) throw ConfigError("make_synthetic: noise must be non-negative");

  Rng root(seed);
  Rng proto_rng = root.stream(0x70726f746fULL);  // "proto"
  Rng noise_rng = root.stream(0x6e6f697365ULL);  // "noise"

  const std::size_t k = static_cast<std::size_t>(spec.num_classes);
  std::vector<std::vector<double>> dirs(k, std::vector<double>(spec.channels));
  for (auto& d : dirs) {
    double norm = 0.0;
    for (double& x : d) {
      x = proto_rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw NumericError("make_synthetic: degenerate prototype draw");
    for (double& x : d) x /= norm;
  }

  // Pairwise Frobenius distance between row-replicated prototypes is
  // sqrt(N) * r * |d_i - d_j|; pick r so the minimum hits `separation`.
  double min_dist = 1e300;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      double acc = 0.0;
      for (std::size_t c = 0; c < spec.channels; ++c) {
        const double diff = dirs[a][c] - dirs[b][c];
        acc += diff * diff;
      }
      min_dist = std::min(min_dist, std::sqrt(acc));
    }
  if (min_dist < 1e-9) throw NumericError("make_synthetic: coincident prototypes");
  const double radius =
      spec.separation / (std::sqrt(static_cast<double>(spec.n_tokens)) * min_dist);

  GCDDataset data;
  data.num_classes = spec.num_classes;
  data.samples.reserve(k * spec.samples_per_class);
  data.labels.reserve(k * spec.samples_per_class);
  if (prototypes_out) prototypes_out->clear();

  for (std::size_t c = 0; c < k; ++c) {
    RealMatrix proto(spec.n_tokens, spec.channels);
    for (std::size_t i = 0; i < spec.n_tokens; ++i)
      for (std::size_t j = 0; j < spec.channels; ++j) proto(i, j) = radius * dirs[c][j];
    if (prototypes_out) prototypes_out->push_back(proto);

    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      RealMatrix sample = proto;
      for (std::size_t i = 0; i < sample.size(); ++i)
        sample.data()[i] += spec.noise * noise_rng.normal();
      data.samples.push_back(std::move(sample));
      data.labels.push_back(static_cast<int>(c));
    }
  }
  data.is_labeled.assign(data.samples.size(), 0);
  return data;
}

void split_gcd(GCDDataset& dataset, double labeled_class_fraction,
               double labeled_instance_fraction, std::uint64_t seed) {
  if (dataset.samples.empty()) throw ConfigError("split_gcd: empty dataset");
  if (!(labeled_class_fraction > 0.0) || labeled_class_fraction > 1.0)
    throw ConfigError("split_gcd: labeled_class_fraction must lie in (0, 1]");
  if (!(labeled_instance_fraction > 0.0) || labeled_instance_fraction > 1.0)
    throw ConfigError("split_gcd: labeled_instance_fraction must lie in (0, 1]");

  Rng root(seed);
  Rng class_rng = root.stream(0x636c617373ULL);  // "class"

  std::vector<int> class_ids(static_cast<std::size_t>(dataset.num_classes));
  std::iota(class_ids.begin(), class_ids.end(), 0);
  class_rng.shuffle(class_ids);

  const std::size_t n_old = static_cast<std::size_t>(
      std::ceil(labeled_class_fraction * static_cast<double>(dataset.num_classes)));
  dataset.old_classes.assign(class_ids.begin(),
                             class_ids.begin() + static_cast<std::ptrdiff_t>(n_old));
  std::sort(dataset.old_classes.begin(), dataset.old_classes.end());

  dataset.is_labeled.assign(dataset.samples.size(), 0);
  for (const int cls : dataset.old_classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < dataset.labels.size(); ++i)
      if (dataset.labels[i] == cls) members.push_back(i);
    Rng member_rng = root.stream(0x696e7374ULL + static_cast<std::uint64_t>(cls));
    member_rng.shuffle(members);
    const std::size_t take = static_cast<std::size_t>(
        std::llround(labeled_instance_fraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < take && i < members.size(); ++i)
      dataset.is_labeled[members[i]] = 1;
  }

  if (dataset.labeled_count() == dataset.samples.size())
    throw ConfigError("split_gcd: split leaves no unlabeled samples");
}

void export_dataset(const GCDDataset& dataset, const std::string& csv_path,
                    const std::string& bin_path) {
  if (dataset.samples.empty()) throw ConfigError("export_dataset: empty dataset");

  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw IoError("export_dataset: cannot open " + csv_path);
  csv << "sample_id,class,labeled\n";
  for (std::size_t i = 0; i < dataset.samples.size(); ++i)
    csv << i << ',' << dataset.labels[i] << ',' << int{dataset.is_labeled[i] != 0} << '\n';
  if (!csv) throw IoError("export_dataset: write failed: " + csv_path);

  std::vector<NamedTensor> tensors;
  NamedTensor meta;
  meta.name = "num_classes";
  meta.dims = {1};
  meta.real_data = {static_cast<double>(dataset.num_classes)};
  tensors.push_back(std::move(meta));

  NamedTensor old_cls;
  old_cls.name = "old_classes";
  old_cls.dims = {dataset.old_classes.size()};
  for (const int c : dataset.old_classes) old_cls.real_data.push_back(c);
  tensors.push_back(std::move(old_cls));

  char name[32];
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const RealMatrix& m = dataset.samples[i];
    std::snprintf(name, sizeof(name), "sample_%06zu", i);
    NamedTensor t;
    t.name = name;
    t.dims = {m.rows(), m.cols()};
    t.real_data.assign(m.data(), m.data() + m.size());
    tensors.push_back(std::move(t));
  }
  save_tensors(bin_path, tensors);
}

GCDDataset import_dataset(const std::string& csv_path, const std::string& bin_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw IoError("import_dataset: cannot open " + csv_path);
  std::string line;
  if (!std::getline(csv, line) || line != "sample_id,class,labeled")
    throw IoError("import_dataset: bad manifest header");

  GCDDataset data;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::size_t id = 0;
    int cls = 0, labeled = 0;
    if (std::sscanf(line.c_str(), "%zu,%d,%d", &id, &cls, &labeled) != 3)
      throw IoError("import_dataset: bad manifest row: " + line);
    if (id != data.labels.size())
      throw IoError("import_dataset: manifest rows out of order");
    data.labels.push_back(cls);
    data.is_labeled.push_back(static_cast<char>(labeled != 0));
  }

  const std::vector<NamedTensor> tensors = load_tensors(bin_path);
  auto find = [&](const std::string& name) -> const NamedTensor& {
    for (const NamedTensor& t : tensors)
      if (t.name == name) return t;
    throw IoError("import_dataset: missing tensor " + name);
  };

  data.num_classes = static_cast<int>(find("num_classes").real_data.at(0));
  for (const double c : find("old_classes").real_data)
    data.old_classes.push_back(static_cast<int>(c));

  char name[32];
  data.samples.resize(data.labels.size());
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    std::snprintf(name, sizeof(name), "sample_%06zu", i);
    const NamedTensor& t = find(name);
    if (t.complex_valued || t.dims.size() != 2)
      throw IoError("import_dataset: bad sample tensor");
    RealMatrix m(t.dims[0], t.dims[1]);
    std::copy(t.real_data.begin(), t.real_data.end(), m.data());
    data.samples[i] = std::move(m);
  }
  return data;
}

}  // namespace sieformer
