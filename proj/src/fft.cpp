#include "thinorbit/fft.hpp"

#include <numbers>

namespace thinorbit {

namespace {

constexpr std::size_t kMaxFftSize = std::size_t{1} << 24;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw config_error("fft size must be a power of two");
  if (sign != 1 && sign != -1) throw config_error("fft sign must be +1 or -1");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  std::vector<std::complex<double>> roots(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    roots[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * (double)k /
                                   (double)n);

  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> t = a[i + k + len / 2] * roots[k * stride];
        a[i + k] = u + t;
        a[i + k + len / 2] = u - t;
      }
    }
  }
}

SpectrumGrid spectrum_grid(const std::vector<double>& coeffs,
                           std::int64_t n_min, std::size_t min_points) {
  std::size_t P = 8;
  while (P < min_points) {
    P <<= 1;
    if (P > kMaxFftSize)
      throw capacity_error("spectrum grid of " + std::to_string(min_points) +
                           " points exceeds the FFT size cap");
  }
  SpectrumGrid grid;
  grid.P = P;
  grid.values.assign(P, {0.0, 0.0});
  // Fold each coefficient to its residue n mod P; the phase of n_min is
  // absorbed by the fold.
  std::size_t r = (std::size_t)(((n_min % (std::int64_t)P) + (std::int64_t)P) %
                                (std::int64_t)P);
  for (double c : coeffs) {
    grid.values[r] += c;
    if (++r == P) r = 0;
  }
  fft_inplace(grid.values, +1);
  return grid;
}

}  // namespace thinorbit
