#pragma once

// Multidimensional forward DFT over Z_{n1} x ... x Z_{nk}, backed by FFTW.
// Private to the library.

#include <complex>
#include <cstdint>
#include <vector>

namespace addcomb::fft {

// In place, row-major: data[xi] <- sum_x data[x] * exp(-2 pi i sum_j xi_j x_j / n_j).
void forward(std::vector<std::complex<double>>& data, const std::vector<std::uint64_t>& dims);

}  // namespace addcomb::fft
