#pragma once

#include <complex>
#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

// Unnormalized forward 2-D DFT: 1-D transforms over rows, then columns.
// Arbitrary (non-power-of-two) extents are handled by Bluestein's chirp
// transform over a padded power-of-two core.
ComplexMatrix fft2(const ComplexMatrix& x);

// Inverse of fft2, scaled by 1/(rows*cols): ifft2(fft2(x)) == x.
ComplexMatrix ifft2(const ComplexMatrix& x);

// Direct O((rows*cols)^2) evaluation of the same transform. Reference
// implementation: shares no code with the fast path, including the
// row/column factorization.
ComplexMatrix dft2_naive(const ComplexMatrix& x);

namespace detail {

// Unnormalized 1-D transform in place; `inverse` flips the twiddle sign
// (still unnormalized).
void fft_inplace(std::vector<std::complex<double>>& v, bool inverse);

}  // namespace detail

}  // namespace sieformer
