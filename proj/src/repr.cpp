#include "thinorbit/repr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

namespace thinorbit {

LinearForm linear_form(const Mat2& m, const GroupSpec& g) {
  LinearForm f;
  f.A = form_step(g, m);
  f.B = form_offset(g, m);
  f.source = m;
  return f;
}

// ---------------------------------------------------------------------------
// Repositioning

GroupSpec precompose_fix(const GroupSpec& g) {
  if (g.positioned()) return g;

  bool fix_v = g.v[0] == 0;
  bool fix_w = g.w[1] == 0;
  auto qualifies = [&](const Mat2& m) {
    if (m == Mat2::identity()) return false;
    if (fix_v && g.v[0] * m.a + g.v[1] * m.c == 0) return false;
    if (fix_w && m.c * g.w[0] + m.d * g.w[1] == 0) return false;
    return true;
  };
  auto better = [](const Mat2& x, const Mat2& y) {
    std::int64_t nx = norm_sq(x), ny = norm_sq(y);
    if (nx != ny) return nx < ny;
    return lex_less(y, x);  // prefer the larger tuple
  };

  for (double T : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    Ball ball = enumerate_ball(g, T);
    const Mat2* best = nullptr;
    for (const Mat2& m : ball.elements) {
      if (!qualifies(m)) continue;
      if (!best || better(m, *best)) best = &m;
    }
    if (best) {
      GroupSpec fixed = g;
      if (fix_v) {
        fixed.v = {g.v[0] * best->a + g.v[1] * best->c,
                   g.v[0] * best->b + g.v[1] * best->d};
      }
      if (fix_w) {
        fixed.w = {best->a * g.w[0] + best->b * g.w[1],
                   best->c * g.w[0] + best->d * g.w[1]};
      }
      return GroupSpec::create(fixed.generators, fixed.J, fixed.v, fixed.w,
                               fixed.prune_factor, fixed.angular_denom);
    }
  }
  throw config_error(
      "no repositioning element found within the search radius; the group "
      "appears to be elementary");
}

// ---------------------------------------------------------------------------
// RepWindow

RepWindow::RepWindow(std::int64_t N, double T_used) : N_(N), T_used_(T_used) {
  if (N < 0) throw config_error("window half-width N must be >= 0");
  marked_.assign((std::size_t)(2 * N + 1), 0);
  witnesses_.resize((std::size_t)(2 * N + 1));
}

bool RepWindow::has(std::int64_t n) const {
  if (n < -N_ || n > N_) return false;
  return marked_[(std::size_t)(n + N_)] != 0;
}

std::optional<RepWindow::Witness> RepWindow::witness(std::int64_t n) const {
  if (!has(n)) return std::nullopt;
  const Stored& s = witnesses_[(std::size_t)(n + N_)];
  return Witness{s.gamma, s.x};
}

void RepWindow::mark(std::int64_t n, const Mat2& gamma, std::int64_t x) {
  if (n < -N_ || n > N_)
    throw config_error("mark outside window: " + std::to_string(n));
  std::size_t idx = (std::size_t)(n + N_);
  std::int64_t gn = norm_sq(gamma);
  if (!marked_[idx]) {
    marked_[idx] = 1;
    ++count_;
    witnesses_[idx] = Stored{gamma, x, gn};
    return;
  }
  Stored& cur = witnesses_[idx];
  std::int64_t ax = x < 0 ? -x : x;
  std::int64_t cx = cur.x < 0 ? -cur.x : cur.x;
  bool take = false;
  if (gn != cur.gnorm) {
    take = gn < cur.gnorm;
  } else if (ax != cx) {
    take = ax < cx;
  } else if (!(gamma == cur.gamma)) {
    take = lex_less(gamma, cur.gamma);
  } else {
    take = x < cur.x;
  }
  if (take) cur = Stored{gamma, x, gn};
}

// ---------------------------------------------------------------------------
// Window filling

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

void fill_from_form(RepWindow& window, std::int64_t N, const Mat2& m,
                    std::int64_t A, std::int64_t B) {
  if (A == 0) {
    if (B >= -N && B <= N) window.mark(B, m, 0);
    return;
  }
  std::int64_t x_lo, x_hi;
  if (A > 0) {
    x_lo = ceil_div(-N - B, A);
    x_hi = floor_div(N - B, A);
  } else {
    x_lo = ceil_div(N - B, A);
    x_hi = floor_div(-N - B, A);
  }
  if (x_lo > x_hi) return;
  __int128 first = (__int128)A * x_lo + B;
  std::int64_t n = (std::int64_t)first;
  for (std::int64_t x = x_lo; x <= x_hi; ++x, n += A) window.mark(n, m, x);
}

}  // namespace

void fill_window(
    const GroupSpec& g, RepWindow& window,
    const std::function<void(const std::function<void(const Mat2&)>&)>&
        enumerate) {
  g.require_positioned("fill_window");
  std::int64_t N = window.N();
  enumerate([&](const Mat2& m) {
    fill_from_form(window, N, m, form_step(g, m), form_offset(g, m));
  });
}

RepWindow represent_set(const GroupSpec& g, std::int64_t N, double T,
                        const BallOptions& opt) {
  g.require_positioned("represent_set");
  RepWindow window(N, T);
  fill_window(g, window, [&](const std::function<void(const Mat2&)>& visit) {
    for_each_ball_element(g, T, opt, visit);
  });
  return window;
}

std::vector<std::int64_t> exceptional_from_window(const ObstructionReport& rep,
                                                  const RepWindow& window) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = -window.N(); n <= window.N(); ++n)
    if (is_admissible(rep, n) && !window.has(n)) out.push_back(n);
  return out;
}

std::vector<std::int64_t> exceptional_set(const GroupSpec& g,
                                          const ObstructionReport& rep,
                                          std::int64_t N, double T,
                                          const BallOptions& opt) {
  return exceptional_from_window(rep, represent_set(g, N, T, opt));
}

std::string exceptional_csv(const GroupSpec& g, const ObstructionReport& rep,
                            const RepWindow& window,
                            const std::vector<std::int64_t>& exceptional) {
  char tbuf[64];
  std::snprintf(tbuf, sizeof tbuf, "%.17g", window.T_used());
  std::string out;
  out += "# generators=";
  for (std::size_t i = 0; i < g.generators.size(); ++i) {
    if (i) out += ";";
    out += mat_to_string(g.generators[i]);
  }
  out += "\n# J=" + std::to_string(g.J) + " v=" + std::to_string(g.v[0]) +
         "," + std::to_string(g.v[1]) + " w=" + std::to_string(g.w[0]) + "," +
         std::to_string(g.w[1]) + "\n";
  out += "# N=" + std::to_string(window.N()) + " T=" + tbuf +
         " Z=" + std::to_string(rep.Z) + "\n";
  for (std::int64_t n : exceptional) out += std::to_string(n) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Smooth weight

double psi_eval(double u) {
  double s = u - 1.5;
  if (s <= -1.0 || s >= 1.0) return 0.0;
  // one exponential keeps the minimum over [1, 2] exactly 1: at s = +-1/2
  // the exponent cancels to exactly zero
  return std::exp(4.0 / 3.0 - 1.0 / (1.0 - s * s));
}

namespace {

double bump(double s) {
  double one_minus = 1.0 - s * s;
  if (one_minus <= 0) return 0.0;
  return std::exp(-1.0 / one_minus);
}

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 15> kGlNode = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr std::array<double, 15> kGlWeight = {
    0.03075324199611727, 0.07036604748810812, 0.1071592204671719,
    0.1395706779261543,  0.1662692058169939,  0.1861610000155622,
    0.1984314853271116,  0.2025782419255613,  0.1984314853271116,
    0.1861610000155622,  0.1662692058169939,  0.1395706779261543,
    0.1071592204671719,  0.07036604748810812, 0.03075324199611727};

template <typename F>
double gl15(const F& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 15; ++i)
    acc += kGlWeight[i] * f(mid + half * kGlNode[i]);
  return acc * half;
}

template <typename F>
double adaptive_gl(const F& f, double a, double b, double abs_tol, int depth) {
  double whole = gl15(f, a, b);
  double mid = 0.5 * (a + b);
  double parts = gl15(f, a, mid) + gl15(f, mid, b);
  if (std::abs(whole - parts) <= abs_tol || depth >= 24) {
    if (depth >= 24 && std::abs(whole - parts) > 1024 * abs_tol)
      throw numeric_error("transform quadrature failed to converge");
    return parts;
  }
  return adaptive_gl(f, a, mid, abs_tol / 2, depth + 1) +
         adaptive_gl(f, mid, b, abs_tol / 2, depth + 1);
}

}  // namespace

double SmoothWeight::hat_direct(double y, double rel_tol) {
  // rel_tol is measured against the full mass Int psi (the transform itself
  // vanishes to every order as y grows, so a result-relative target is not
  // meaningful in the tail).
  double ay = std::abs(y);
  auto f = [ay](double s) { return bump(s) * std::cos(2 * std::numbers::pi * ay * s); };
  // panels no wider than a quarter oscillation period
  int panels = (int)std::ceil(std::max(4.0, 4.0 * ay));
  double acc = 0;
  double abs_tol = rel_tol * 0.444 / panels;
  for (int i = 0; i < panels; ++i) {
    double a = (double)i / panels, b = (double)(i + 1) / panels;
    acc += adaptive_gl(f, a, b, abs_tol, 0);
  }
  return 2.0 * std::exp(4.0 / 3.0) * acc;
}

SmoothWeight::SmoothWeight() {
  std::size_t count = (std::size_t)std::llround(grid_max_ / grid_step_) + 1;
  grid_.resize(count);
  for (std::size_t j = 0; j < count; ++j)
    grid_[j] = hat_direct((double)j * grid_step_);

  // envelope decay fit over two log-spaced windows of the cached tail
  auto window_slope = [&](double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double y = lo; y < hi; y *= 1.15) {
      double env = 0;
      for (double t = y; t < y * 1.15 && t <= grid_max_; t += grid_step_)
        env = std::max(env,
                       std::abs(grid_[(std::size_t)std::llround(t / grid_step_)]));
      if (env <= 0) continue;
      double lx = std::log(y), ly = std::log(env);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (n < 3) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  double slope_near = window_slope(8.0, 16.0);
  double slope_far = window_slope(16.0, 31.0);
  tail_exponent_ = slope_far;
  superpolynomial_ = slope_far < slope_near - 0.5;
}

double SmoothWeight::hat(double y) const {
  double ay = std::abs(y);
  if (ay >= grid_max_ - 2 * grid_step_) return hat_direct(ay);
  double t = ay / grid_step_;
  std::size_t j = (std::size_t)t;
  double u = t - (double)j;
  // Catmull-Rom through the four surrounding samples; index -1 uses the
  // evenness of the transform.
  double pm1 = j == 0 ? grid_[1] : grid_[j - 1];
  double p0 = grid_[j];
  double p1 = grid_[j + 1];
  double p2 = grid_[j + 2];
  double a0 = -0.5 * pm1 + 1.5 * p0 - 1.5 * p1 + 0.5 * p2;
  double a1 = pm1 - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
  double a2 = -0.5 * pm1 + 0.5 * p1;
  double a3 = p0;
  return ((a0 * u + a1) * u + a2) * u + a3;
}

std::complex<double> SmoothWeight::transform(double y) const {
  double h = hat(y);
  double phase = 3.0 * std::numbers::pi * y;  // e(3y/2)
  return {h * std::cos(phase), h * std::sin(phase)};
}

const SmoothWeight& SmoothWeight::standard() {
  static const SmoothWeight instance;
  return instance;
}

double psi_hat(double y) { return SmoothWeight::standard().hat(y); }

// ---------------------------------------------------------------------------
// Ensemble and the representation function

Ensemble make_ensemble(const GroupSpec& g, const CircleParams& p,
                       const BallOptions& opt) {
  g.require_positioned("make_ensemble");
  if (!(p.T > 0) || !(p.X > 0))
    throw config_error("ensemble needs positive T and X");
  Ensemble ens;
  ens.g = g;
  ens.p = p;
  ens.bt = filter_angular(enumerate_ball(g, p.T, opt), g);
  ens.forms.reserve(ens.bt.elements.size());
  for (const Mat2& m : ens.bt.elements) {
    LinearForm f = linear_form(m, g);
    if (f.A == 0)
      throw numeric_error("angular-filtered element has a degenerate form");
    ens.forms.push_back(f);
  }
  ens.X = p.X;
  return ens;
}

double representation_function(const Ensemble& ens, std::int64_t n) {
  double acc = 0;
  for (const LinearForm& f : ens.forms) {
    std::int64_t t = n - f.B;
    if (t % f.A != 0) continue;
    double x = (double)(t / f.A);
    acc += psi_eval(x / ens.X);
  }
  return acc;
}

double representation_function(const GroupSpec& g, const CircleParams& p,
                               std::int64_t n, const BallOptions& opt) {
  return representation_function(make_ensemble(g, p, opt), n);
}

namespace {

std::pair<std::int64_t, std::int64_t> weight_support_x(double X) {
  return {(std::int64_t)std::floor(0.5 * X), (std::int64_t)std::ceil(2.5 * X)};
}

}  // namespace

std::vector<double> representation_sweep(const Ensemble& ens, std::int64_t n_lo,
                                         std::int64_t n_hi) {
  if (n_hi < n_lo) throw config_error("empty sweep range");
  std::vector<double> acc((std::size_t)(n_hi - n_lo + 1), 0.0);
  auto [x0, x1] = weight_support_x(ens.X);
  for (const LinearForm& f : ens.forms) {
    for (std::int64_t x = x0; x <= x1; ++x) {
      __int128 n = (__int128)f.A * x + f.B;
      if (n < n_lo || n > n_hi) continue;
      acc[(std::size_t)((std::int64_t)n - n_lo)] += psi_eval((double)x / ens.X);
    }
  }
  return acc;
}

std::pair<std::vector<double>, std::int64_t> representation_array(
    const Ensemble& ens) {
  auto [x0, x1] = weight_support_x(ens.X);
  if (ens.forms.empty()) return {std::vector<double>{0.0}, 0};
  __int128 lo = 0, hi = 0;
  bool first = true;
  for (const LinearForm& f : ens.forms) {
    __int128 e0 = (__int128)f.A * x0 + f.B;
    __int128 e1 = (__int128)f.A * x1 + f.B;
    __int128 mn = e0 < e1 ? e0 : e1;
    __int128 mx = e0 < e1 ? e1 : e0;
    if (first || mn < lo) lo = mn;
    if (first || mx > hi) hi = mx;
    first = false;
  }
  __int128 width = hi - lo + 1;
  if (width > (1 << 25))
    throw capacity_error(
        "representation array support is too wide: " +
        int128_to_string(width) +
        " entries (shrink T or X before asking for the dense array)");
  std::vector<double> coeffs((std::size_t)width, 0.0);
  for (const LinearForm& f : ens.forms) {
    for (std::int64_t x = x0; x <= x1; ++x) {
      double p = psi_eval((double)x / ens.X);
      if (p == 0.0) continue;
      __int128 n = (__int128)f.A * x + f.B;
      coeffs[(std::size_t)(n - lo)] += p;
    }
  }
  return {std::move(coeffs), (std::int64_t)lo};
}

// ---------------------------------------------------------------------------
// Reference enumerations

std::vector<Mat2> word_ball(const GroupSpec& g, double T, double slack,
                            std::uint64_t cap) {
  if (!(slack >= 1)) throw config_error("word_ball slack must be >= 1");
  std::vector<Mat2> steps;
  for (const Mat2& gen : g.generators) {
    for (const Mat2& s : {gen, mat_inv(gen)})
      if (std::find(steps.begin(), steps.end(), s) == steps.end())
        steps.push_back(s);
  }
  const long double keep = (long double)T * T;
  const long double bound = (long double)slack * T * slack * T;
  std::set<std::array<std::int64_t, 4>> seen;
  std::vector<Mat2> frontier, out;
  auto key = [](const Mat2& m) {
    return std::array<std::int64_t, 4>{m.a, m.b, m.c, m.d};
  };
  if ((long double)norm_sq(Mat2::identity()) <= bound) {
    seen.insert(key(Mat2::identity()));
    frontier.push_back(Mat2::identity());
  }
  while (!frontier.empty()) {
    std::vector<Mat2> next;
    for (const Mat2& m : frontier) {
      for (const Mat2& s : steps) {
        Mat2 prod = mat_mul(m, s);
        if ((long double)norm_sq(prod) > bound) continue;
        if (!seen.insert(key(prod)).second) continue;
        if (seen.size() > cap)
          throw capacity_error("word_ball exceeded its state cap");
        next.push_back(prod);
      }
    }
    frontier.swap(next);
  }
  for (const auto& k : seen) {
    if ((long double)(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3]) <
        keep)
      out.push_back(Mat2::make(k[0], k[1], k[2], k[3]));
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<Mat2> words_up_to_length(const std::vector<Mat2>& generators,
                                     int length, std::uint64_t cap) {
  std::vector<Mat2> steps;
  for (const Mat2& gen : generators) {
    for (const Mat2& s : {gen, mat_inv(gen)})
      if (std::find(steps.begin(), steps.end(), s) == steps.end())
        steps.push_back(s);
  }
  std::set<std::array<std::int64_t, 4>> seen;
  auto key = [](const Mat2& m) {
    return std::array<std::int64_t, 4>{m.a, m.b, m.c, m.d};
  };
  std::vector<Mat2> frontier{Mat2::identity()};
  seen.insert(key(Mat2::identity()));
  for (int level = 0; level < length; ++level) {
    std::vector<Mat2> next;
    for (const Mat2& m : frontier) {
      for (const Mat2& s : steps) {
        Mat2 prod = mat_mul(m, s);
        if (!seen.insert(key(prod)).second) continue;
        if (seen.size() > cap)
          throw capacity_error("words_up_to_length exceeded its state cap");
        next.push_back(prod);
      }
    }
    frontier.swap(next);
  }
  std::vector<Mat2> out;
  out.reserve(seen.size());
  for (const auto& k : seen) out.push_back(Mat2::make(k[0], k[1], k[2], k[3]));
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace thinorbit
