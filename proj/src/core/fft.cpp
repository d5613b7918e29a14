#include "core/fft.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace fieldinfer {

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  if (!is_pow2(n)) throw ConfigError("fft size must be a power of two");
  for (size_t i = 1, j = 0; i < n; i++) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / static_cast<double>(len);
    if (!inverse) ang = -ang;
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < len / 2; k++) {
        // Direct twiddle evaluation keeps every stage bit-stable; sizes here
        // are small enough that the extra trig cost is irrelevant.
        std::complex<double> w(std::cos(ang * static_cast<double>(k)),
                               std::sin(ang * static_cast<double>(k)));
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    double s = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= s;
  }
}

}  // namespace fieldinfer
