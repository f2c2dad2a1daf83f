#include "thinorbit/params.hpp"

#include <cmath>
#include <numeric>

namespace thinorbit {

namespace {

long long checked_ll(__int128 x, const char* what) {
  if (x > (__int128)std::numeric_limits<long long>::max() ||
      x < -(__int128)std::numeric_limits<long long>::max())
    throw overflow_error(std::string("rational overflow in ") + what);
  return (long long)x;
}

Rational normalized(__int128 num, __int128 den, const char* what) {
  if (den == 0) throw config_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;
  Rational r;
  r.num = checked_ll(num / a, what);
  r.den = checked_ll(den / a, what);
  return r;
}

}  // namespace

Rational::Rational(long long n) : num(n), den(1) {}

Rational::Rational(long long n, long long d) {
  *this = normalized(n, d, "Rational()");
}

namespace {

// stoll wrapper that converts its std exceptions into the config error the
// parsing contract promises and demands the whole string be consumed.
long long parse_ll_exact(const std::string& text, const std::string& whole) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw config_error("bad rational literal: " + whole);
  }
  if (pos != text.size())
    throw config_error("bad rational literal: " + whole);
  return value;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw config_error("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long n = parse_ll_exact(text.substr(0, slash), text);
    long long d = parse_ll_exact(text.substr(slash + 1), text);
    return Rational(n, d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || digits.empty())
      throw config_error("bad decimal literal: " + text);
    long long n = parse_ll_exact(digits, text);
    long long d = 1;
    for (std::size_t i = 0; i < frac_len; ++i)
      d = checked_ll((__int128)d * 10, "decimal literal");
    return Rational(n, d);
  }
  long long n = parse_ll_exact(text, text);
  return Rational(n);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& x, const Rational& y) {
  return normalized((__int128)x.num * y.den + (__int128)y.num * x.den,
                    (__int128)x.den * y.den, "+");
}

Rational operator-(const Rational& x, const Rational& y) {
  return normalized((__int128)x.num * y.den - (__int128)y.num * x.den,
                    (__int128)x.den * y.den, "-");
}

Rational operator*(const Rational& x, const Rational& y) {
  return normalized((__int128)x.num * y.num, (__int128)x.den * y.den, "*");
}

Rational operator/(const Rational& x, const Rational& y) {
  if (y.num == 0) throw config_error("rational division by zero");
  return normalized((__int128)x.num * y.den, (__int128)x.den * y.num, "/");
}

Rational operator-(const Rational& x) {
  Rational r;
  r.num = -x.num;
  r.den = x.den;
  return r;
}

bool operator<(const Rational& x, const Rational& y) {
  return (__int128)x.num * y.den < (__int128)y.num * x.den;
}

Rational solve_zero(const LinExp& e) {
  if (e.c1.num == 0)
    throw config_error("linear expression has no delta dependence");
  return -e.c0 / e.c1;
}

LinExp k0_exponent() {
  // T^(4 delta / 49 - 10/147)
  return LinExp{Rational(-10, 147), Rational(4, 49)};
}

LinExp q0_exponent(const Rational& eps1) {
  // T^(2 delta / 49 - 5/147 - eps1)
  return LinExp{Rational(-5, 147) - eps1, Rational(2, 49)};
}

std::vector<ConstraintCheck> check_constraints(const Rational& delta,
                                               const Rational& eps1) {
  LinExp k0 = k0_exponent();
  LinExp q0 = q0_exponent(eps1);
  std::vector<ConstraintCheck> out;

  auto push = [&](const char* name, const LinExp& lhs, const char* rel,
                  const LinExp& rhs) {
    ConstraintCheck c;
    c.name = name;
    c.lhs = lhs.eval(delta);
    c.rhs = rhs.eval(delta);
    c.relation = rel;
    c.ok = (c.relation == "<=") ? (c.lhs <= c.rhs) : (c.lhs >= c.rhs);
    out.push_back(c);
  };

  // Q0^5 K0 stays under the major-arc error budget
  push(kMajorArcBudget, Rational(5) * q0 + k0, "<=",
       LinExp{Rational(-5, 21), Rational(2, 7)});
  // K0 capped by the ball-growth exponent
  push(kK0Cap, k0, "<=", LinExp{Rational(-3, 4), Rational(3, 2)});
  // Q0^2 <= K0
  push(kQ0SqLeK0, Rational(2) * q0, "<=", k0);
  // Q0 large enough to beat the trivial-bound regime
  push(kQ0Floor, q0, ">=", LinExp{Rational(4), Rational(-4)});
  return out;
}

CircleParams choose_parameters(double N, const Rational& delta,
                               const Rational& eps0, const Rational& eps1,
                               const Rational& T_exponent) {
  if (!(N > 1)) throw config_error("N must exceed 1");
  if (!(Rational(5, 6) < delta) || !(delta <= Rational(1)))
    throw config_error("delta must lie in (5/6, 1], got " + delta.str());
  if (!(Rational(0) < T_exponent) || !(T_exponent < Rational(1, 2)))
    throw config_error("T exponent must lie in (0, 1/2), got " +
                       T_exponent.str());
  if (eps0 < Rational(0) || eps1 < Rational(0))
    throw config_error("eps0 and eps1 must be nonnegative");

  for (const ConstraintCheck& c : check_constraints(delta, eps1)) {
    if (!c.ok)
      throw infeasible_error(
          c.name, "constraint " + c.name + " fails at delta = " + delta.str() +
                      ": exponent " + c.lhs.str() + " " + c.relation + " " +
                      c.rhs.str() + " does not hold");
  }

  CircleParams p;
  p.N = N;
  p.delta = delta.to_double();
  p.eps0 = eps0.to_double();
  p.eps1 = eps1.to_double();
  p.T = std::pow(N, T_exponent.to_double());
  p.X = N / p.T;
  p.M = std::pow(p.T, 1.0 + p.eps0);
  p.K0 = std::pow(p.T, k0_exponent().eval(delta).to_double());
  p.Q0 = std::pow(p.T, q0_exponent(eps1).eval(delta).to_double());
  p.constraints_verified = true;
  return p;
}

CircleParams explicit_params(double N, double T, double Q0, double K0,
                             double eps0, double eps1, const Rational& delta) {
  if (!(N > 0) || !(T > 0)) throw config_error("N and T must be positive");
  if (!(Q0 >= 1)) throw config_error("Q0 must be >= 1");
  if (!(K0 > 0)) throw config_error("K0 must be positive");
  CircleParams p;
  p.N = N;
  p.T = T;
  p.X = N / T;
  p.eps0 = eps0;
  p.eps1 = eps1;
  p.M = std::pow(T, 1.0 + eps0);
  p.Q0 = Q0;
  p.K0 = K0;
  p.delta = delta.to_double();
  p.constraints_verified = false;
  // record (not enforce) which prescribed-exponent constraints would fail
  Rational e1 = Rational(0);
  if (eps1 > 0) {
    // carry an approximate rational for the record only
    e1 = Rational((long long)std::llround(eps1 * 1e6), 1000000);
  }
  for (const ConstraintCheck& c : check_constraints(delta, e1))
    if (!c.ok) p.violated.push_back(c.name);
  return p;
}

Rational feasibility_boundary_delta() {
  // delta where the Q0 floor meets the prescribed Q0 exponent at eps1 = 0
  LinExp gap = q0_exponent(Rational(0)) - LinExp{Rational(4), Rational(-4)};
  return solve_zero(gap);
}

}  // namespace thinorbit
