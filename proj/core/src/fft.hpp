#pragma once

#include <complex>
#include <span>

namespace dispersim::detail {

enum class FftDirection { forward, backward };

/// Unnormalized in-place 2-D DFT of a row-major n2 x n1 array (axis 1
/// contiguous). forward uses exp(-i...), backward exp(+i...).
/// Plans are cached per shape; execution is thread-safe.
void fft2d(std::span<std::complex<double>> data, int n1, int n2,
           FftDirection dir);

/// Unnormalized in-place 1-D DFT of length n.
void fft1d(std::span<std::complex<double>> data, FftDirection dir);

} // namespace dispersim::detail
