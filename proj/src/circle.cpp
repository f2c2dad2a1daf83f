#include "thinorbit/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace thinorbit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t mobius(std::int64_t m) {
  std::int64_t mu = 1;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      m /= p;
      if (m % p == 0) return 0;
      mu = -mu;
    }
  }
  if (m > 1) mu = -mu;
  return mu;
}

std::int64_t mod_pos(std::int64_t t, std::int64_t q) {
  std::int64_t r = t % q;
  return r < 0 ? r + q : r;
}

// psi(x / X) tabulated over the integers of its support.
struct PsiRow {
  std::int64_t x0 = 0, x1 = -1;
  std::vector<double> values;
};

PsiRow psi_row(double X) {
  PsiRow r;
  if (!(X > 0)) throw config_error("weight row needs X > 0");
  r.x0 = (std::int64_t)std::floor(0.5 * X);
  r.x1 = (std::int64_t)std::ceil(2.5 * X);
  r.values.resize((std::size_t)(r.x1 - r.x0 + 1));
  for (std::int64_t x = r.x0; x <= r.x1; ++x)
    r.values[(std::size_t)(x - r.x0)] = psi_eval((double)x / X);
  return r;
}

}  // namespace

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n) {
  if (q < 1) throw config_error("ramanujan_sum needs q >= 1");
  std::int64_t r = mod_pos(n, q);
  std::int64_t g = r == 0 ? q : std::gcd(q, r);
  std::int64_t acc = 0;
  for (std::int64_t d = 1; d * d <= g; ++d) {
    if (g % d != 0) continue;
    acc = chk_add(acc, chk_mul(d, mobius(q / d), "ramanujan term"),
                  "ramanujan sum");
    std::int64_t e = g / d;
    if (e != d)
      acc = chk_add(acc, chk_mul(e, mobius(q / e), "ramanujan term"),
                    "ramanujan sum");
  }
  return acc;
}

double hat_t(double x) { return std::max(0.0, std::min(1.0 + x, 1.0 - x)); }

double hat_t_fourier(double y) {
  double z = std::numbers::pi * y;
  if (std::abs(z) < 1e-4) {
    double z2 = z * z;
    return 1.0 - z2 / 3.0 + 2.0 * z2 * z2 / 45.0;
  }
  double s = std::sin(z) / z;
  return s * s;
}

double spike(double theta, const CircleParams& p) {
  if (!(p.N > 0) || !(p.K0 > 0))
    throw config_error("spike needs positive N and K0");
  std::int64_t qmax = (std::int64_t)p.Q0;
  double halfwidth = p.K0 / p.N;
  double acc = 0;
  for (std::int64_t q = 1; q <= qmax; ++q) {
    std::int64_t a_lo = (std::int64_t)std::ceil((theta - halfwidth) * q);
    std::int64_t a_hi = (std::int64_t)std::floor((theta + halfwidth) * q);
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
      if (std::gcd(mod_pos(a, q), q) != 1) continue;
      acc += hat_t((theta - (double)a / (double)q) * p.N / p.K0);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Singular series

SingularSeries::SingularSeries(const GroupSpec& g, std::int64_t Q0, ASum mode,
                               std::uint64_t quotient_cap)
    : Q0_(Q0), mode_(mode) {
  if (Q0 < 1) throw config_error("singular series needs Q0 >= 1");
  qdata_.reserve((std::size_t)Q0);
  for (std::int64_t q = 1; q <= Q0; ++q) {
    CongruenceTable table = subgroup_closure(g, q, quotient_cap);
    QData d;
    d.q = q;
    d.group_size = table.quotient.size();
    std::vector<std::int64_t> hist((std::size_t)q, 0);
    std::int64_t v1 = mod_pos(g.v[0], q), v2 = mod_pos(g.v[1], q);
    std::int64_t w1 = mod_pos(g.w[0], q), w2 = mod_pos(g.w[1], q);
    for (const ModMat& m : table.quotient) {
      std::int64_t top = ((std::int64_t)m.a * w1 + (std::int64_t)m.b * w2) % q;
      std::int64_t bot = ((std::int64_t)m.c * w1 + (std::int64_t)m.d * w2) % q;
      ++hist[(std::size_t)((v1 * top + v2 * bot) % q)];
    }
    for (std::int64_t a = 0; a < q; ++a) {
      if (mode == ASum::coprime_only && std::gcd(a, q) != 1) continue;
      std::complex<double> h{0.0, 0.0};
      for (std::int64_t r = 0; r < q; ++r) {
        if (hist[(std::size_t)r] == 0) continue;
        double ang = kTwoPi * (double)((r * a) % q) / (double)q;
        h += (double)hist[(std::size_t)r] *
             std::complex<double>(std::cos(ang), std::sin(ang));
      }
      d.a_used.push_back(a);
      d.H.push_back(h);
    }
    qdata_.push_back(std::move(d));
  }
}

double SingularSeries::term_of(const QData& d, std::int64_t n) const {
  std::int64_t q = d.q;
  std::int64_t nr = mod_pos(-n, q);
  std::complex<double> s{0.0, 0.0};
  for (std::size_t i = 0; i < d.a_used.size(); ++i) {
    double ang = kTwoPi * (double)((nr * d.a_used[i]) % q) / (double)q;
    s += d.H[i] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  double value = s.real() / (double)d.group_size;
  double imag = s.imag() / (double)d.group_size;
  if (std::abs(imag) > 1e-9 * (1.0 + std::abs(value)))
    throw numeric_error(
        "singular series term q=" + std::to_string(q) +
        " kept a non-cancelling imaginary part " + std::to_string(imag));
  return value;
}

double SingularSeries::eval(std::int64_t n) const {
  double acc = 0;
  for (const QData& d : qdata_) acc += term_of(d, n);
  return acc;
}

double SingularSeries::term(std::int64_t q, std::int64_t n) const {
  for (const QData& d : qdata_)
    if (d.q == q) return term_of(d, n);
  throw config_error("singular series term q=" + std::to_string(q) +
                     " is outside the truncation Q0=" + std::to_string(Q0_));
}

double singular_series(const GroupSpec& g, std::int64_t n, std::int64_t Q0,
                       SingularSeries::ASum mode) {
  return SingularSeries(g, Q0, mode).eval(n);
}

// ---------------------------------------------------------------------------
// rhat and the Poisson identity

std::complex<double> rhat(const Ensemble& ens, double theta) {
  PsiRow row = psi_row(ens.X);
  std::complex<double> acc{0.0, 0.0};
  for (const LinearForm& f : ens.forms) {
    for (std::int64_t x = row.x0; x <= row.x1; ++x) {
      double pw = row.values[(std::size_t)(x - row.x0)];
      if (pw == 0.0) continue;
      double t = (double)(f.A * x + f.B) * theta;
      double ang = kTwoPi * (t - std::floor(t));
      acc += pw * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }
  return acc;
}

std::complex<double> rhat(const GroupSpec& g, const CircleParams& p,
                          double theta, const BallOptions& opt) {
  return rhat(make_ensemble(g, p, opt), theta);
}

std::complex<double> rhat_at_rational(const Ensemble& ens, std::int64_t a,
                                      std::int64_t q, double beta) {
  if (q < 1) throw config_error("rhat_at_rational needs q >= 1");
  PsiRow row = psi_row(ens.X);
  std::int64_t ar = mod_pos(a, q);
  std::complex<double> acc{0.0, 0.0};
  for (const LinearForm& f : ens.forms) {
    for (std::int64_t x = row.x0; x <= row.x1; ++x) {
      double pw = row.values[(std::size_t)(x - row.x0)];
      if (pw == 0.0) continue;
      std::int64_t fx = f.A * x + f.B;
      std::int64_t idx = (mod_pos(fx, q) * ar) % q;
      double ang = kTwoPi * ((double)idx / (double)q + (double)fx * beta);
      acc += pw * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }
  return acc;
}

double poisson_check(const Ensemble& ens, std::int64_t a, std::int64_t q,
                     double beta) {
  if (q < 1) throw config_error("poisson_check needs q >= 1");
  std::complex<double> lhs = rhat_at_rational(ens, a, q, beta);
  const SmoothWeight& w = SmoothWeight::standard();
  std::int64_t ar = mod_pos(a, q);
  std::complex<double> rhs{0.0, 0.0};
  for (const LinearForm& f : ens.forms) {
    if (f.A % q != 0) continue;
    std::int64_t idx = (mod_pos(f.B, q) * ar) % q;
    double ang = kTwoPi * ((double)idx / (double)q + (double)f.B * beta);
    rhs += std::complex<double>(std::cos(ang), std::sin(ang)) *
           w.transform((double)f.A * ens.X * beta);
  }
  rhs *= ens.X;
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

double poisson_check(const GroupSpec& g, const CircleParams& p, std::int64_t a,
                     std::int64_t q, double beta, const BallOptions& opt) {
  return poisson_check(make_ensemble(g, p, opt), a, q, beta);
}

// ---------------------------------------------------------------------------
// Main and error terms

double main_term(const Ensemble& ens, const SingularSeries& series,
                 std::int64_t n) {
  if (!(ens.p.N > 0) || !(ens.p.K0 > 0))
    throw config_error("main_term needs positive N and K0");
  double scale = ens.p.K0 / ens.p.N;
  PsiRow row = psi_row(ens.X);
  double arch = 0;
  for (const LinearForm& f : ens.forms) {
    for (std::int64_t x = row.x0; x <= row.x1; ++x) {
      double pw = row.values[(std::size_t)(x - row.x0)];
      if (pw == 0.0) continue;
      arch += pw * hat_t_fourier(scale * (double)(f.A * x + f.B - n));
    }
  }
  return scale * series.eval(n) * arch;
}

double main_term(const GroupSpec& g, const CircleParams& p, std::int64_t n,
                 SingularSeries::ASum mode, const BallOptions& opt) {
  SingularSeries series(g, (std::int64_t)p.Q0, mode);
  return main_term(make_ensemble(g, p, opt), series, n);
}

double error_term(const Ensemble& ens, const SingularSeries& series,
                  std::int64_t n) {
  return representation_function(ens, n) - main_term(ens, series, n);
}

double error_term(const GroupSpec& g, const CircleParams& p, std::int64_t n,
                  SingularSeries::ASum mode, const BallOptions& opt) {
  SingularSeries series(g, (std::int64_t)p.Q0, mode);
  Ensemble ens = make_ensemble(g, p, opt);
  return error_term(ens, series, n);
}

// ---------------------------------------------------------------------------
// Multiplicity and shifted counting

std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Mat2>>
form_classes(const GroupSpec& g, double T, const BallOptions& opt) {
  g.require_positioned("form_classes");
  Ball ball = filter_angular(enumerate_ball(g, T, opt), g);
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Mat2>> out;
  for (const Mat2& m : ball.elements)
    out[{form_step(g, m), form_offset(g, m)}].push_back(m);
  return out;
}

MultiplicityHistogram multiplicity_histogram(const GroupSpec& g, double T,
                                             const BallOptions& opt) {
  MultiplicityHistogram h;
  for (const auto& [form, members] : form_classes(g, T, opt)) {
    std::int64_t mult = (std::int64_t)members.size();
    ++h.counts[mult];
    h.max_multiplicity = std::max(h.max_multiplicity, mult);
  }
  return h;
}

std::int64_t shifted_count(const Ensemble& ens, std::int64_t x,
                           std::int64_t n) {
  if (!(ens.p.N > 0) || !(ens.p.K0 > 0))
    throw config_error("shifted_count needs positive N and K0");
  double halfwin = ens.p.N / (2.0 * ens.p.K0);
  std::int64_t count = 0;
  for (const LinearForm& f : ens.forms) {
    std::int64_t value = (f.A / ens.g.J) * x + f.B;
    if (std::abs((double)(value - n)) <= halfwin) ++count;
  }
  return count;
}

std::int64_t shifted_count(const GroupSpec& g, const CircleParams& p,
                           std::int64_t x, std::int64_t n,
                           const BallOptions& opt) {
  return shifted_count(make_ensemble(g, p, opt), x, n);
}

// ---------------------------------------------------------------------------
// Spectrum-grid helpers

SpectrumGrid ensemble_spectrum(const Ensemble& ens, std::size_t min_points) {
  auto [coeffs, offset] = representation_array(ens);
  std::size_t base = (std::size_t)std::llround(8.0 * (2.0 * ens.p.N + 1.0));
  std::size_t pts = std::max({min_points, base, coeffs.size()});
  return spectrum_grid(coeffs, offset, pts);
}

double grid_coefficient(const SpectrumGrid& grid, std::int64_t n) {
  std::int64_t P = (std::int64_t)grid.P;
  std::int64_t r = mod_pos(n, P);
  std::complex<double> acc{0.0, 0.0};
  for (std::int64_t j = 0; j < P; ++j) {
    double ang = -kTwoPi * (double)((r * j) % P) / (double)P;
    acc += grid.values[(std::size_t)j] *
           std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc.real() / (double)P;
}

std::vector<double> spike_on_grid(const SpectrumGrid& grid,
                                  const CircleParams& p) {
  std::vector<double> out(grid.P);
  for (std::size_t j = 0; j < grid.P; ++j) out[j] = spike(grid.theta(j), p);
  return out;
}

double spiked_coefficient(const SpectrumGrid& grid,
                          const std::vector<double>& spike_values,
                          std::int64_t n) {
  if (spike_values.size() != grid.P)
    throw config_error("spike table size does not match the grid");
  std::int64_t P = (std::int64_t)grid.P;
  std::int64_t r = mod_pos(n, P);
  std::complex<double> acc{0.0, 0.0};
  for (std::int64_t j = 0; j < P; ++j) {
    double s = spike_values[(std::size_t)j];
    if (s == 0.0) continue;
    double ang = -kTwoPi * (double)((r * j) % P) / (double)P;
    acc += s * grid.values[(std::size_t)j] *
           std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc.real() / (double)P;
}

// ---------------------------------------------------------------------------
// Minor-arc profile

namespace {

struct WindowSums {
  const SpectrumGrid& grid;

  double power(std::int64_t j) const {
    std::int64_t P = (std::int64_t)grid.P;
    std::size_t jm = (std::size_t)mod_pos(j, P);
    return std::norm(grid.values[jm]);
  }

  // integral of |rhat|^2 over [center + b1, center + b2] on the grid
  double flat(double center, double b1, double b2) const {
    if (b2 < b1) return 0.0;
    double P = (double)grid.P;
    std::int64_t j1 = (std::int64_t)std::ceil((center + b1) * P);
    std::int64_t j2 = (std::int64_t)std::floor((center + b2) * P);
    double acc = 0;
    for (std::int64_t j = j1; j <= j2; ++j) acc += power(j);
    return acc / P;
  }

  // same with the weight (beta / bmax)^2
  double parabolic(double center, double bmax) const {
    if (!(bmax > 0)) return 0.0;
    double P = (double)grid.P;
    std::int64_t j1 = (std::int64_t)std::ceil((center - bmax) * P);
    std::int64_t j2 = (std::int64_t)std::floor((center + bmax) * P);
    double acc = 0;
    for (std::int64_t j = j1; j <= j2; ++j) {
      double beta = (double)j / P - center;
      double wgt = beta / bmax;
      acc += wgt * wgt * power(j);
    }
    return acc / P;
  }
};

MinorArcProfile profile_on_grid(const SpectrumGrid& grid,
                                const CircleParams& p) {
  MinorArcProfile out;
  WindowSums ws{grid};
  std::int64_t Q0 = (std::int64_t)p.Q0;
  std::int64_t qmax = (std::int64_t)p.M;
  double arcw = p.K0 / p.N;

  for (std::int64_t q = 1; q <= Q0; ++q) {
    double inv_qM = 1.0 / ((double)q * p.M);
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      double c = (double)a / (double)q;
      out.I1 += ws.parabolic(c, arcw);
      out.I2 += ws.flat(c, arcw, inv_qM) + ws.flat(c, -inv_qM, -arcw);
    }
  }

  std::vector<double> blocks;
  std::vector<std::int64_t> block_starts;
  for (std::int64_t Q = Q0; Q < qmax; Q *= 2) {
    block_starts.push_back(Q);
    blocks.push_back(0.0);
  }
  for (std::int64_t q = Q0 + 1; q <= qmax; ++q) {
    double inv_qM = 1.0 / ((double)q * p.M);
    double inner = 0, outer = 0;
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      double c = (double)a / (double)q;
      inner += ws.flat(c, -1.0 / p.N, 1.0 / p.N);
      outer += ws.flat(c, 1.0 / p.N, inv_qM) + ws.flat(c, -inv_qM, -1.0 / p.N);
    }
    out.I4 += inner;
    out.I3 += outer;
    std::size_t bi = 0;
    for (std::int64_t Q = Q0; q > 2 * Q; Q *= 2) ++bi;
    if (bi < blocks.size()) blocks[bi] += inner;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i)
    out.dyadic.emplace_back(block_starts[i], blocks[i]);
  return out;
}

}  // namespace

MinorArcProfile minor_arc_profile(const Ensemble& ens,
                                  const MinorArcOptions& mo) {
  const CircleParams& p = ens.p;
  if (!(p.N > 0) || !(p.K0 > 0) || !(p.M >= 1) || !(p.Q0 >= 1))
    throw config_error("minor arc profile needs N, K0 > 0 and M, Q0 >= 1");
  auto [coeffs, offset] = representation_array(ens);
  std::size_t base = (std::size_t)std::llround(8.0 * (2.0 * p.N + 1.0));
  std::size_t pts = std::max({mo.min_points, base, coeffs.size()});
  SpectrumGrid grid = spectrum_grid(coeffs, offset, pts);
  MinorArcProfile full = profile_on_grid(grid, p);

  if (mo.resolution_check) {
    SpectrumGrid half = spectrum_grid(coeffs, offset, grid.P / 2);
    MinorArcProfile hp = profile_on_grid(half, p);
    double total = full.I1 + full.I2 + full.I3 + full.I4;
    double drift = std::abs(full.I1 - hp.I1) + std::abs(full.I2 - hp.I2) +
                   std::abs(full.I3 - hp.I3) + std::abs(full.I4 - hp.I4);
    full.est_error = total > 0 ? drift / total : (drift > 0 ? 1.0 : 0.0);
    if (full.est_error > mo.resolution_tol)
      throw numeric_error(
          "minor-arc grid too coarse: half-resolution deviation " +
          std::to_string(full.est_error) + " exceeds " +
          std::to_string(mo.resolution_tol));
  }
  return full;
}

MinorArcProfile minor_arc_profile(const GroupSpec& g, const CircleParams& p,
                                  const BallOptions& opt,
                                  const MinorArcOptions& mo) {
  return minor_arc_profile(make_ensemble(g, p, opt), mo);
}

}  // namespace thinorbit
