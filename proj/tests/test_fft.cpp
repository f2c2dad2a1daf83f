#include <complex>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "thinorbit/fft.hpp"

using namespace thinorbit;

TEST_CASE("radix-two transform matches the quadratic definition") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t n : {8u, 64u, 256u}) {
    std::vector<std::complex<double>> a(n);
    for (auto& z : a) z = {unif(rng), unif(rng)};
    std::vector<std::complex<double>> got = a;
    fft_inplace(got, +1);
    for (std::size_t j = 0; j < n; j += n / 8) {
      std::complex<double> want = 0;
      for (std::size_t k = 0; k < n; ++k)
        want += a[k] * oracles::e_of((double)(j * k) / (double)n);
      REQUIRE(std::abs(got[j] - want) < 1e-9);
    }
  }
}

TEST_CASE("opposite kernels compose to n times the identity") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::complex<double>> a(128);
  for (auto& z : a) z = {unif(rng), unif(rng)};
  std::vector<std::complex<double>> b = a;
  fft_inplace(b, +1);
  fft_inplace(b, -1);
  for (std::size_t k = 0; k < a.size(); ++k)
    REQUIRE(std::abs(b[k] - 128.0 * a[k]) < 1e-9);
}

TEST_CASE("transform size must be a power of two") {
  std::vector<std::complex<double>> a(24);
  REQUIRE_THROWS_AS(fft_inplace(a, +1), config_error);
}

TEST_CASE("spectrum sampling is exact even when coefficients fold") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> coeffs(1000);
  for (auto& c : coeffs) c = unif(rng);
  std::int64_t n_min = -123;

  SECTION("coarse grid: heavy folding, values still exact") {
    SpectrumGrid grid = spectrum_grid(coeffs, n_min, 8);
    REQUIRE(grid.P == 8);
    for (std::size_t j = 0; j < grid.P; ++j) {
      std::complex<double> want =
          oracles::naive_dft(coeffs, n_min, grid.theta(j));
      REQUIRE(std::abs(grid.values[j] - want) < 1e-9);
    }
  }
  SECTION("fine grid: no collisions, energy identity holds") {
    SpectrumGrid grid = spectrum_grid(coeffs, n_min, coeffs.size());
    REQUIRE(grid.P == 1024);
    double lhs = 0;
    for (const auto& z : grid.values) lhs += std::norm(z);
    lhs /= (double)grid.P;
    double rhs = 0;
    for (double c : coeffs) rhs += c * c;
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-12));
  }
  SECTION("negative support offsets carry their phase") {
    std::vector<double> single{1.0};
    SpectrumGrid grid = spectrum_grid(single, -7, 16);
    for (std::size_t j = 0; j < grid.P; ++j) {
      std::complex<double> want = oracles::e_of(-7.0 * grid.theta(j));
      REQUIRE(std::abs(grid.values[j] - want) < 1e-12);
    }
  }
}
