#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace sieformer {

// Counter-based generator: output i of a stream with key k is
// mix64(k + i * GAMMA), the splitmix64 finalizer over an affine counter.
// Every subsystem derives its own stream key from one root seed, so runs
// are reproducible bit-for-bit regardless of call order across subsystems
// and independent of the platform's <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  // Independent stream derived from this one; `tag` names the subsystem.
  Rng stream(std::uint64_t tag) const { return Rng(mix64(key_ ^ mix64(tag + 0x9e3779b97f4a7c15ULL))); }

  std::uint64_t next_u64() { return mix64(key_ + ++counter_ * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, bound) via rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sieformer
