#pragma once

#include "tomo/types.hpp"

#include <vector>

namespace tomo {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 FFT. Forward: A_k = sum_j a_j exp(-2 pi i j k / n);
/// inverse divides by n. Length must be a power of two.
void fft_inplace(std::vector<Complex>& a, bool inverse);

/// Convenience wrappers.
std::vector<Complex> fft(const std::vector<Complex>& a);
std::vector<Complex> ifft(const std::vector<Complex>& a);

}  // namespace tomo
