#include "tomo/fft.hpp"

#include <cmath>

namespace tomo {

void fft_inplace(std::vector<Complex>& a, bool inverse) {
  std::size_t n = a.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("fft: length must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    Complex wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (Complex& x : a) x /= static_cast<double>(n);
}

std::vector<Complex> fft(const std::vector<Complex>& a) {
  std::vector<Complex> out = a;
  fft_inplace(out, false);
  return out;
}

std::vector<Complex> ifft(const std::vector<Complex>& a) {
  std::vector<Complex> out = a;
  fft_inplace(out, true);
  return out;
}

}  // namespace tomo
