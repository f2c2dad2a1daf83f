#pragma once

// Circle-method quantities over an ensemble: tent and spike functions,
// Ramanujan sums, the singular series, the exponential sum rhat with its
// Poisson identity, main and error terms, form-multiplicity statistics,
// shifted counts, and the minor-arc integral profile.

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "thinorbit/congruence.hpp"
#include "thinorbit/fft.hpp"
#include "thinorbit/params.hpp"
#include "thinorbit/repr.hpp"

namespace thinorbit {

// c_q(n) = sum over a in [1,q] coprime to q of e(a n / q), computed exactly
// as sum_{d | gcd(q,n)} d * mu(q/d).
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n);

// The tent max(0, min(1+x, 1-x)) and its transform (sin(pi y)/(pi y))^2.
double hat_t(double x);
double hat_t_fourier(double y);

// Sum of tents of half-width K0/N centered at every reduced fraction a/q
// with q <= Q0, extended 1-periodically.
double spike(double theta, const CircleParams& p);

// Truncated singular series over the finite quotients of the group:
// sum over q <= Q0 of (1/#quotient_q) sum_a sum_{g0 in quotient_q}
// e((offset(g0) - n) a / q).  The a-sum runs over all residues mod q by
// default (full_range); coprime_only restricts it to gcd(a,q) = 1, turning
// the inner sum into a Ramanujan-weighted average (the two differ by
// Moebius re-summation and only coprime_only converges as Q0 grows).
class SingularSeries {
 public:
  enum class ASum { full_range, coprime_only };

  SingularSeries(const GroupSpec& g, std::int64_t Q0,
                 ASum mode = ASum::full_range,
                 std::uint64_t quotient_cap = 10'000'000);

  double eval(std::int64_t n) const;
  // Contribution of a single modulus q <= Q0 (diagnostics and tests).
  double term(std::int64_t q, std::int64_t n) const;

  std::int64_t Q0() const { return Q0_; }
  ASum mode() const { return mode_; }

 private:
  struct QData {
    std::int64_t q = 1;
    std::size_t group_size = 1;
    std::vector<std::int64_t> a_used;        // included a values
    std::vector<std::complex<double>> H;     // per a: sum_r hist[r] e(ra/q)
  };
  double term_of(const QData& d, std::int64_t n) const;

  std::int64_t Q0_ = 1;
  ASum mode_ = ASum::full_range;
  std::vector<QData> qdata_;
};

double singular_series(
    const GroupSpec& g, std::int64_t n, std::int64_t Q0,
    SingularSeries::ASum mode = SingularSeries::ASum::full_range);

// Direct evaluation of rhat(theta) = sum_gamma sum_x psi(x/X) e(f(x) theta).
std::complex<double> rhat(const Ensemble& ens, double theta);
std::complex<double> rhat(const GroupSpec& g, const CircleParams& p,
                          double theta, const BallOptions& opt = {});

// rhat at theta = a/q + beta with the rational part of every phase reduced
// mod q exactly (no rounding in f * a / q).
std::complex<double> rhat_at_rational(const Ensemble& ens, std::int64_t a,
                                      std::int64_t q, double beta);

// Relative residual |rhat(a/q+beta) - X sum_{gamma: q | A} e(aB/q)
// transform(A X beta) e(B beta)| / (1 + |rhat|): the zero-frequency Poisson
// term against the direct sum.  Small only when gcd(a,q) = 1, q <= M and
// |beta| < 1/(qM); none of that is enforced, so illegal inputs show the
// residual growing (a negative check, not an error).
double poisson_check(const Ensemble& ens, std::int64_t a, std::int64_t q,
                     double beta);
double poisson_check(const GroupSpec& g, const CircleParams& p, std::int64_t a,
                     std::int64_t q, double beta, const BallOptions& opt = {});

// (K0/N) * S(n) * sum_gamma sum_x psi(x/X) hat_t_fourier((K0/N)(f(x) - n)).
double main_term(const Ensemble& ens, const SingularSeries& series,
                 std::int64_t n);
double main_term(
    const GroupSpec& g, const CircleParams& p, std::int64_t n,
    SingularSeries::ASum mode = SingularSeries::ASum::full_range,
    const BallOptions& opt = {});

// representation_function - main_term (their defining decomposition).
double error_term(const Ensemble& ens, const SingularSeries& series,
                  std::int64_t n);
double error_term(
    const GroupSpec& g, const CircleParams& p, std::int64_t n,
    SingularSeries::ASum mode = SingularSeries::ASum::full_range,
    const BallOptions& opt = {});

// Elements of the angular-filtered ball grouped by their (A, B) pair.
std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Mat2>>
form_classes(const GroupSpec& g, double T, const BallOptions& opt = {});

struct MultiplicityHistogram {
  // multiplicity -> number of (A, B) classes with that many elements
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t max_multiplicity = 0;  // 0 for an empty ball
};

MultiplicityHistogram multiplicity_histogram(const GroupSpec& g, double T,
                                             const BallOptions& opt = {});

// #{gamma in the filtered ball : |(A/J) x + B - n| <= N/(2 K0)}, the count
// of near-hits of the forms precomposed with the plain shift (1,x;0,1).
std::int64_t shifted_count(const Ensemble& ens, std::int64_t x,
                           std::int64_t n);
std::int64_t shifted_count(const GroupSpec& g, const CircleParams& p,
                           std::int64_t x, std::int64_t n,
                           const BallOptions& opt = {});

// The standard spectrum grid of an ensemble: the dense coefficient array
// sampled on at least max(min_points, 8(2N+1), support width) points.
SpectrumGrid ensemble_spectrum(const Ensemble& ens,
                               std::size_t min_points = 0);

// (1/P) sum_j values[j] e(-n j / P): recovers the coefficient of n when P
// is at least the support width.
double grid_coefficient(const SpectrumGrid& grid, std::int64_t n);

// spike(theta_j) for every grid point (reusable across coefficients).
std::vector<double> spike_on_grid(const SpectrumGrid& grid,
                                  const CircleParams& p);

// (1/P) sum_j spike_values[j] values[j] e(-n j / P): the spike-localized
// coefficient, the quadrature oracle for main_term.
double spiked_coefficient(const SpectrumGrid& grid,
                          const std::vector<double>& spike_values,
                          std::int64_t n);

// The four window integrals of |rhat|^2 over rational centers a/q:
//   I1: q <= Q0,     |beta| <= K0/N, weight (N beta / K0)^2
//   I2: q <= Q0,     K0/N <= |beta| <= 1/(qM)
//   I3: Q0 < q <= M, 1/N <= |beta| <= 1/(qM)
//   I4: Q0 < q <= M, |beta| <= 1/N
// with a running over reduced residues, plus the dyadic split of I4 over
// blocks Q < q <= 2Q.  All quadrature on the spectrum grid.
struct MinorArcProfile {
  double I1 = 0, I2 = 0, I3 = 0, I4 = 0;
  std::vector<std::pair<std::int64_t, double>> dyadic;  // (Q, I_Q) blocks
  // summed |I_k(full grid) - I_k(half grid)| over the total, the quadrature
  // resolution estimate
  double est_error = 0;
};

struct MinorArcOptions {
  std::size_t min_points = 0;    // 0: the ensemble_spectrum default
  bool resolution_check = true;  // recompute on the half grid and compare
  double resolution_tol = 0.10;
};

MinorArcProfile minor_arc_profile(const Ensemble& ens,
                                  const MinorArcOptions& mo = {});
MinorArcProfile minor_arc_profile(const GroupSpec& g, const CircleParams& p,
                                  const BallOptions& opt = {},
                                  const MinorArcOptions& mo = {});

}  // namespace thinorbit
