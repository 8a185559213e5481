#include "sieformer/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "sieformer/error.hpp"

namespace sieformer {

namespace detail {

namespace {

using cd = std::complex<double>;

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_pow2(std::vector<cd>& v, bool inverse) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const cd wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd u = v[i + k];
        const cd t = w * v[i + k + len / 2];
        v[i + k] = u + t;
        v[i + k + len / 2] = u - t;
        w *= wl;
      }
    }
  }
}

// Bluestein chirp transform for arbitrary n: the length-n DFT becomes a
// circular convolution carried on a padded power-of-two core. Chirp phases
// use k^2 mod 2n to keep the angle argument small.
void fft_bluestein(std::vector<cd>& v, bool inverse) {
  const std::size_t n = v.size();
  std::vector<cd> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = (k * k) % (2 * n);
    const double ang = (inverse ? 1.0 : -1.0) * std::numbers::pi *
                       static_cast<double>(m) / static_cast<double>(n);
    chirp[k] = cd(std::cos(ang), std::sin(ang));
  }

  const std::size_t core = std::bit_ceil(2 * n - 1);
  std::vector<cd> a(core, cd(0.0, 0.0));
  std::vector<cd> b(core, cd(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = v[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[core - k] = std::conj(chirp[k]);

  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t k = 0; k < core; ++k) a[k] *= b[k];
  fft_pow2(a, true);
  const double inv_core = 1.0 / static_cast<double>(core);
  for (std::size_t k = 0; k < n; ++k) v[k] = a[k] * inv_core * chirp[k];
}

}  // namespace

void fft_inplace(std::vector<cd>& v, bool inverse) {
  const std::size_t n = v.size();
  if (n <= 1) return;
  if (std::has_single_bit(n)) {
    fft_pow2(v, inverse);
  } else {
    fft_bluestein(v, inverse);
  }
}

}  // namespace detail

namespace {

ComplexMatrix fft2_impl(const ComplexMatrix& x, bool inverse) {
  if (x.empty()) throw DimensionError("fft2: empty matrix");
  if (!all_finite(x)) throw NumericError("fft2: non-finite entry");

  ComplexMatrix out = x;
  std::vector<std::complex<double>> buf;

  buf.resize(out.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) buf[j] = out(i, j);
    detail::fft_inplace(buf, inverse);
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = buf[j];
  }

  buf.resize(out.rows());
  for (std::size_t j = 0; j < out.cols(); ++j) {
    for (std::size_t i = 0; i < out.rows(); ++i) buf[i] = out(i, j);
    detail::fft_inplace(buf, inverse);
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) = buf[i];
  }
  return out;
}

}  // namespace

ComplexMatrix fft2(const ComplexMatrix& x) { return fft2_impl(x, false); }

ComplexMatrix ifft2(const ComplexMatrix& x) {
  ComplexMatrix out = fft2_impl(x, true);
  const double scale = 1.0 / static_cast<double>(x.rows() * x.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= scale;
  return out;
}

ComplexMatrix dft2_naive(const ComplexMatrix& x) {
  if (x.empty()) throw DimensionError("dft2_naive: empty matrix");
  const std::size_t r = x.rows();
  const std::size_t c = x.cols();
  ComplexMatrix out(r, c);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l < c; ++l) {
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t m = 0; m < r; ++m) {
        for (std::size_t n = 0; n < c; ++n) {
          const double ang =
              -2.0 * std::numbers::pi *
              (static_cast<double>(k * m) / static_cast<double>(r) +
               static_cast<double>(l * n) / static_cast<double>(c));
          acc += x(m, n) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
      }
      out(k, l) = acc;
    }
  }
  return out;
}

}  // namespace sieformer
