#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dtheat {

// In-place radix-2 complex FFT; size must be a power of two. The inverse
// transform includes the 1/M scaling.
void fft_inplace(std::span<std::complex<double>> a, bool inverse);

// Separable transform of a dim-dimensional array with m points per axis
// (row-major, size m^dim), applied in place along every axis.
void fft_nd_inplace(std::vector<std::complex<double>>& data, int dim, int m, bool inverse);

}  // namespace dtheat
