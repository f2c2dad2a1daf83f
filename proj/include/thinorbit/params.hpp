#pragma once

// Exact rational arithmetic for the parameter system and its feasibility
// constraints.  All constraint checks compare exponents of T as exact
// rationals; floating point enters only when the final numeric parameter
// values are materialized.

#include <cstdint>
#include <string>
#include <vector>

#include "thinorbit/common.hpp"

namespace thinorbit {

struct Rational {
  long long num = 0;
  long long den = 1;  // always > 0, gcd(|num|, den) = 1

  Rational() = default;
  Rational(long long n);  // NOLINT: implicit integer promotion is intended
  Rational(long long n, long long d);

  static Rational parse(const std::string& text);  // "3", "-5/7", "0.99"

  double to_double() const { return (double)num / (double)den; }
  std::string str() const;

  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x);
  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num == y.num && x.den == y.den;
  }
  friend bool operator<(const Rational& x, const Rational& y);
  friend bool operator<=(const Rational& x, const Rational& y) {
    return x < y || x == y;
  }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator>=(const Rational& x, const Rational& y) {
    return y <= x;
  }
};

// Linear expression c0 + c1 * delta with rational coefficients; the currency
// of the exponent constraint system.
struct LinExp {
  Rational c0;
  Rational c1;

  Rational eval(const Rational& delta) const { return c0 + c1 * delta; }

  friend LinExp operator+(const LinExp& x, const LinExp& y) {
    return {x.c0 + y.c0, x.c1 + y.c1};
  }
  friend LinExp operator-(const LinExp& x, const LinExp& y) {
    return {x.c0 - y.c0, x.c1 - y.c1};
  }
  friend LinExp operator*(const Rational& s, const LinExp& x) {
    return {s * x.c0, s * x.c1};
  }
};

// Root of c0 + c1 * delta = 0.
Rational solve_zero(const LinExp& e);

// The tuple of run-scale parameters.  T * X = N always.  `violated` lists
// the role names of any exponent constraints that fail for the carried
// (delta, eps1); it is empty when produced by choose_parameters.
struct CircleParams {
  double N = 0, T = 0, X = 0;
  double M = 0;  // depth of the rational approximation, T^(1+eps0)
  double Q0 = 0, K0 = 0;
  double eps0 = 0, eps1 = 0;
  double delta = 1;
  bool constraints_verified = false;
  std::vector<std::string> violated;
};

// Role names of the four exponent constraints (these strings appear in
// infeasibility errors and reports).
inline constexpr const char* kMajorArcBudget = "major-arc-budget";
inline constexpr const char* kK0Cap = "k0-cap";
inline constexpr const char* kQ0SqLeK0 = "q0-sq-le-k0";
inline constexpr const char* kQ0Floor = "q0-floor";

// Exponents (of T) prescribed for K0 and Q0 as functions of delta and eps1.
LinExp k0_exponent();
LinExp q0_exponent(const Rational& eps1);

struct ConstraintCheck {
  std::string name;
  Rational lhs;  // exponent value at the given delta
  Rational rhs;
  bool ok = false;
  std::string relation;  // "<=" or ">="
};

// Evaluates the four constraints at (delta, eps1) with K0, Q0 at their
// prescribed exponents.
std::vector<ConstraintCheck> check_constraints(const Rational& delta,
                                               const Rational& eps1);

// Derives every parameter from (N, delta, eps0, eps1, T_exponent) with
// T = N^T_exponent, X = N/T, M = T^(1+eps0), and K0, Q0 at the prescribed
// exponents.  Throws infeasible_error (naming the constraint) if any of the
// four exponent constraints fails; requires delta in (5/6, 1] and
// T_exponent in (0, 1/2).
CircleParams choose_parameters(double N, const Rational& delta,
                               const Rational& eps0, const Rational& eps1,
                               const Rational& T_exponent);

// Fixture-scale construction: takes the parameter values directly (the
// prescribed exponents are degenerate at desk scale), records violations
// instead of failing.
CircleParams explicit_params(double N, double T, double Q0, double K0,
                             double eps0, double eps1,
                             const Rational& delta = Rational(1));

// The exact delta at which the Q0 floor constraint meets the prescribed Q0
// exponent when eps1 = 0 (the feasibility boundary of the system).
Rational feasibility_boundary_delta();

}  // namespace thinorbit
