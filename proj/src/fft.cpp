#include "dtheat/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace dtheat {

namespace {

bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace

void fft_inplace(std::span<std::complex<double>> a, bool inverse) {
  const std::size_t m = a.size();
  if (!is_pow2(m)) throw std::invalid_argument("fft_inplace: size must be a power of two");
  if (m == 1) return;

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = sign * 2.0 * 3.14159265358979323846 / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < m; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(m);
    for (auto& x : a) x *= inv;
  }
}

void fft_nd_inplace(std::vector<std::complex<double>>& data, int dim, int m, bool inverse) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("fft_nd_inplace: dim must be 1..3");
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(m);
  if (data.size() != total) throw std::invalid_argument("fft_nd_inplace: size mismatch");

  std::vector<std::complex<double>> line(m);
  // row-major: axis `ax` has stride m^(dim-1-ax)
  for (int ax = 0; ax < dim; ++ax) {
    std::size_t stride = 1;
    for (int d = ax + 1; d < dim; ++d) stride *= static_cast<std::size_t>(m);
    const std::size_t lines = total / static_cast<std::size_t>(m);
    for (std::size_t l = 0; l < lines; ++l) {
      // decompose the line index into the (outer, inner) block coordinates
      const std::size_t inner = l % stride;
      const std::size_t outer = l / stride;
      const std::size_t base = outer * stride * static_cast<std::size_t>(m) + inner;
      if (stride == 1) {
        fft_inplace(std::span<std::complex<double>>(data.data() + base, m), inverse);
      } else {
        for (int i = 0; i < m; ++i) line[i] = data[base + i * stride];
        fft_inplace(line, inverse);
        for (int i = 0; i < m; ++i) data[base + i * stride] = line[i];
      }
    }
  }
}

}  // namespace dtheat
