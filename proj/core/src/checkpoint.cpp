#include "sieformer/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'E', 'F'};

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_pod(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return in.gcount() == static_cast<std::streamsize>(sizeof(T));
}

[[noreturn]] void truncated(const std::string& path) {
  throw IoError("checkpoint: truncated or corrupt file: " + path);
}

}  // namespace

std::uint64_t NamedTensor::element_count() const {
  std::uint64_t n = 1;
  for (const std::uint64_t d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

void save_tensors(const std::string& path, const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("checkpoint: cannot open for writing: " + path);

  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kCheckpointVersion);

  for (const NamedTensor& t : tensors) {
    const std::uint64_t count = t.element_count();
    const std::size_t expected = t.complex_valued ? t.complex_data.size() : t.real_data.size();
    if (count != expected)
      throw IoError("checkpoint: dims disagree with payload for tensor " + t.name);

    write_pod(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_pod(out, static_cast<std::uint32_t>(t.complex_valued ? 1 : 0));
    write_pod(out, static_cast<std::uint32_t>(t.dims.size()));
    for (const std::uint64_t d : t.dims) write_pod(out, d);
    if (t.complex_valued) {
      // std::complex<double> is layout-compatible with double[2] (re, im).
      out.write(reinterpret_cast<const char*>(t.complex_data.data()),
                static_cast<std::streamsize>(t.complex_data.size() * sizeof(double) * 2));
    } else {
      out.write(reinterpret_cast<const char*>(t.real_data.data()),
                static_cast<std::streamsize>(t.real_data.size() * sizeof(double)));
    }
  }
  if (!out) throw IoError("checkpoint: write failed: " + path);
}

std::vector<NamedTensor> load_tensors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open for reading: " + path);

  char magic[4];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("checkpoint: bad magic (not a SIEF container): " + path);
  std::uint32_t version = 0;
  if (!read_pod(in, version)) truncated(path);
  if (version != kCheckpointVersion)
    throw IoError("checkpoint: unsupported version " + std::to_string(version));

  std::vector<NamedTensor> tensors;
  while (true) {
    std::uint32_t name_len = 0;
    in.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != sizeof(name_len)) truncated(path);
    if (name_len > (1u << 20)) throw IoError("checkpoint: implausible name length");

    NamedTensor t;
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    if (in.gcount() != static_cast<std::streamsize>(name_len)) truncated(path);

    std::uint32_t dtype = 0, rank = 0;
    if (!read_pod(in, dtype) || !read_pod(in, rank)) truncated(path);
    if (dtype > 1) throw IoError("checkpoint: unknown dtype tag");
    if (rank > 64) throw IoError("checkpoint: implausible rank");
    t.complex_valued = dtype == 1;
    t.dims.resize(rank);
    for (std::uint32_t i = 0; i < rank; ++i)
      if (!read_pod(in, t.dims[i])) truncated(path);

    const std::uint64_t count = t.element_count();
    if (count > (std::uint64_t{1} << 32)) throw IoError("checkpoint: implausible size");
    if (t.complex_valued) {
      t.complex_data.resize(count);
      const std::streamsize bytes = static_cast<std::streamsize>(count * sizeof(double) * 2);
      in.read(reinterpret_cast<char*>(t.complex_data.data()), bytes);
      if (in.gcount() != bytes) truncated(path);
    } else {
      t.real_data.resize(count);
      const std::streamsize bytes = static_cast<std::streamsize>(count * sizeof(double));
      in.read(reinterpret_cast<char*>(t.real_data.data()), bytes);
      if (in.gcount() != bytes) truncated(path);
    }
    tensors.push_back(std::move(t));
  }
  return tensors;
}

}  // namespace sieformer
