#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace rdmusic::detail {

/// In-place unnormalized 2D DFT with positive exponent over `count` row-major
/// rows x cols blocks stored back to back.
void fft2d_positive_inplace(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols,
                            std::size_t count);

}  // namespace rdmusic::detail
