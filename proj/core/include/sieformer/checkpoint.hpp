#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace sieformer {

// One tensor record of the flat binary container. Payloads are row-major
// doubles; complex tensors interleave re/im. Round-trips are bit-exact.
struct NamedTensor {
  std::string name;
  bool complex_valued = false;
  std::vector<std::uint64_t> dims;
  std::vector<double> real_data;
  std::vector<std::complex<double>> complex_data;

  std::uint64_t element_count() const;
};

// Container layout: magic "SIEF", version u32, then tensor records until
// EOF. Record: name length u32, UTF-8 name, dtype u32 (0 real, 1 complex),
// rank u32, dims u64 each, payload of f64.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_tensors(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_tensors(const std::string& path);

}  // namespace sieformer
