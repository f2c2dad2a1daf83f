#pragma once

// Power-of-two FFT and the uniform spectrum grid of an integer-supported
// coefficient array.

#include <complex>
#include <cstdint>
#include <vector>

#include "thinorbit/common.hpp"

namespace thinorbit {

// In-place radix-2 FFT; a.size() must be a power of two.  sign = +1 computes
// out[j] = sum_k a[k] e(+jk/P), sign = -1 the conjugate kernel.  No 1/P
// normalization is applied.
void fft_inplace(std::vector<std::complex<double>>& a, int sign);

// Uniform samples of rhat(theta) = sum_n R(n) e(n theta) at theta = j/P.
struct SpectrumGrid {
  std::size_t P = 0;
  std::vector<std::complex<double>> values;  // values[j] = rhat(j / P)

  double theta(std::size_t j) const { return (double)j / (double)P; }
};

// Builds the grid with P the least power of two >= max(min_points, 8).
// coeffs[k] is the coefficient of n = n_min + k.  Coefficients are folded
// mod P before the transform, which leaves every sampled value exact
// (e(n j / P) depends only on n mod P); quadrature statements such as
// Parseval additionally need P >= coeffs.size() so no two coefficients
// collide.
SpectrumGrid spectrum_grid(const std::vector<double>& coeffs,
                           std::int64_t n_min, std::size_t min_points);

}  // namespace thinorbit
