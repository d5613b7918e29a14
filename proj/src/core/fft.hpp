#ifndef FIELDINFER_CORE_FFT_HPP_
#define FIELDINFER_CORE_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace fieldinfer {

constexpr bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n);

// In-place iterative radix-2 transform; a.size() must be a power of two.
// Forward uses e^{-2πi jk/N}; inverse applies the conjugate and the 1/N scale.
void fft(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_FFT_HPP_
