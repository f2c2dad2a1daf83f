#pragma once

// Linear forms attached to group elements, the represented-set window with
// witnesses, exceptional sets, the smooth weight, and the weighted
// representation function.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "thinorbit/congruence.hpp"
#include "thinorbit/matgroup.hpp"
#include "thinorbit/params.hpp"

namespace thinorbit {

// The arithmetic progression attached to gamma: values A*x + B.
struct LinearForm {
  std::int64_t A = 0;  // progression step
  std::int64_t B = 0;  // progression offset, the direct value at x = 0
  Mat2 source;
};

LinearForm linear_form(const Mat2& m, const GroupSpec& g);

// Repositions v (and/or the column vector w) by group elements so that
// v[0] != 0 and w[1] != 0, which leaves the represented set unchanged:
// replacing v by v*g0 or w by g0*w only re-parameterizes the orbit.  Picks
// the smallest-norm ball element that fixes every violated coordinate
// (ties broken by entry order, preferring the larger tuple).  Returns the
// input unchanged when it is already positioned.
GroupSpec precompose_fix(const GroupSpec& g);

// Witnessed coverage bitmap over the window [-N, N].
class RepWindow {
 public:
  RepWindow() = default;
  RepWindow(std::int64_t N, double T_used);

  std::int64_t N() const { return N_; }
  double T_used() const { return T_used_; }
  bool direct_and_progression() const { return true; }

  bool has(std::int64_t n) const;
  std::size_t count() const { return count_; }

  struct Witness {
    Mat2 gamma;
    std::int64_t x = 0;
  };
  std::optional<Witness> witness(std::int64_t n) const;

  // Marks n as represented by (gamma, x); keeps the witness with the
  // smallest (norm, |x|) lexicographically (then matrix order, then x).
  void mark(std::int64_t n, const Mat2& gamma, std::int64_t x);

 private:
  std::int64_t N_ = 0;
  double T_used_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> marked_;
  struct Stored {
    Mat2 gamma;
    std::int64_t x = 0;
    std::int64_t gnorm = 0;
  };
  std::vector<Stored> witnesses_;
};

// Marks every n in [-N, N] reachable as A*x + B over the plain (unfiltered)
// ball of radius T, including every direct value (x = 0).  The angular
// condition plays no role in representability.
RepWindow represent_set(const GroupSpec& g, std::int64_t N, double T,
                        const BallOptions& opt = {});

// Streaming helper: fills `window` from the forms of the matrices produced
// by `enumerate`, which must call its argument once per matrix.
void fill_window(
    const GroupSpec& g, RepWindow& window,
    const std::function<void(const std::function<void(const Mat2&)>&)>&
        enumerate);

// Admissible (per the report) integers in [-N, N] not marked in the window.
std::vector<std::int64_t> exceptional_set(const GroupSpec& g,
                                          const ObstructionReport& rep,
                                          std::int64_t N, double T,
                                          const BallOptions& opt = {});
std::vector<std::int64_t> exceptional_from_window(const ObstructionReport& rep,
                                                  const RepWindow& window);

// CSV: `#` metadata lines (group, N, T, Z), then one integer per line.
std::string exceptional_csv(const GroupSpec& g, const ObstructionReport& rep,
                            const RepWindow& window,
                            const std::vector<std::int64_t>& exceptional);

// The smooth bump: psi(u) = e^(4/3) * exp(-1/(1-s^2)) with s = u - 3/2,
// supported on (1/2, 5/2), >= 1 on [1, 2], minimum there exactly 1.
double psi_eval(double u);

// The centered cosine transform of psi on the shared cached instance (see
// SmoothWeight::hat below).
double psi_hat(double y);

// Cached transform machinery for psi.  hat(y) is the centered cosine
// transform 2*Int_0^1 psi(3/2 + s) cos(2 pi y s) ds — real, even, equal to
// Int psi at y = 0; transform(y) = Int psi(u) e(y u) du = e(3 y / 2) hat(y).
class SmoothWeight {
 public:
  SmoothWeight();

  double eval(double u) const { return psi_eval(u); }
  double hat(double y) const;
  std::complex<double> transform(double y) const;

  // Least-squares slope of log|hat| against log y over the cached tail;
  // the decay is faster than any polynomial, so the fitted exponent keeps
  // growing with the fit window and the flag below reports that.
  double tail_exponent() const { return tail_exponent_; }
  bool superpolynomial_tail() const { return superpolynomial_; }

  // Direct adaptive quadrature of the centered transform (no cache); also
  // the oracle the cached path is tested against.
  static double hat_direct(double y, double rel_tol = 1e-10);

  static const SmoothWeight& standard();

 private:
  double grid_step_ = 1.0 / 512;
  double grid_max_ = 32.0;
  std::vector<double> grid_;  // hat at y = j * grid_step_
  double tail_exponent_ = 0;
  bool superpolynomial_ = false;
};

// The angular-filtered ball with its forms and the run parameters; the
// input every spectral-side operation consumes.
struct Ensemble {
  GroupSpec g;
  CircleParams p;
  Ball bt;                       // angular filtered, ||gamma|| < T
  std::vector<LinearForm> forms;  // one per ball element, step != 0
  double X = 0;
};

Ensemble make_ensemble(const GroupSpec& g, const CircleParams& p,
                       const BallOptions& opt = {});

// Weighted count sum_gamma sum_x psi(x/X) [A x + B = n].
double representation_function(const Ensemble& ens, std::int64_t n);
double representation_function(const GroupSpec& g, const CircleParams& p,
                               std::int64_t n, const BallOptions& opt = {});

// Values for every n in [n_lo, n_hi], computed in one pass over (form, x).
std::vector<double> representation_sweep(const Ensemble& ens,
                                         std::int64_t n_lo, std::int64_t n_hi);

// Full-support coefficient array of the representation function: first
// element corresponds to n = offset.
std::pair<std::vector<double>, std::int64_t> representation_array(
    const Ensemble& ens);

// Reference enumerations, deliberately independent of the production ball
// search: a plain ordered-set breadth-first closure bounded by
// slack * T (no other pruning)...
std::vector<Mat2> word_ball(const GroupSpec& g, double T, double slack,
                            std::uint64_t cap = 50'000'000);
// ...and the set of all products of at most `length` generator/inverse
// letters, with no norm bound at all.
std::vector<Mat2> words_up_to_length(const std::vector<Mat2>& generators,
                                     int length,
                                     std::uint64_t cap = 50'000'000);

}  // namespace thinorbit
