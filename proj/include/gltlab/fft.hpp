#pragma once

#include <bit>
#include <cmath>

#include "gltlab/common.hpp"

namespace gltlab {

inline bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline size_t next_power_of_two(size_t n) { return std::bit_ceil(n); }

// In-place radix-2 Cooley-Tukey; sign = -1 is the forward transform
// X_k = sum_j x_j e^{-2 pi i jk/n}, sign = +1 the unnormalized inverse.
inline void fft_radix2(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  if (!is_power_of_two(n)) throw InvalidParameterError("fft_radix2: length must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / double(len);
    const cdouble wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cdouble w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const cdouble u = a[i + k];
        const cdouble v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// DFT of arbitrary length: FFT when the length is a power of two, direct
// O(n^2) evaluation otherwise (desk-scale fallback).
inline std::vector<cdouble> dft(const std::vector<cdouble>& x, int sign) {
  const size_t n = x.size();
  if (is_power_of_two(n)) {
    std::vector<cdouble> a = x;
    fft_radix2(a, sign);
    return a;
  }
  std::vector<cdouble> out(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    cdouble acc = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * M_PI * double(j) * double(k) / double(n);
      acc += x[j] * cdouble(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace gltlab
