#include "thinorbit/matgroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace thinorbit {

namespace {

void check_entry_range(std::int64_t x, const char* what) {
  if (x > kOverflowGuard || x < -kOverflowGuard)
    throw overflow_error(std::string("matrix entry out of range in ") + what +
                         ": " + std::to_string(x));
}

}  // namespace

Mat2 Mat2::make(std::int64_t a, std::int64_t b, std::int64_t c,
                std::int64_t d) {
  check_entry_range(a, "Mat2 entry a");
  check_entry_range(b, "Mat2 entry b");
  check_entry_range(c, "Mat2 entry c");
  check_entry_range(d, "Mat2 entry d");
  __int128 det = (__int128)a * d - (__int128)b * c;
  if (det != 1)
    throw config_error("matrix " + std::to_string(a) + "," + std::to_string(b) +
                       "," + std::to_string(c) + "," + std::to_string(d) +
                       " does not have determinant 1");
  Mat2 m;
  m.a = a;
  m.b = b;
  m.c = c;
  m.d = d;
  return m;
}

bool lex_less(const Mat2& x, const Mat2& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.c != y.c) return x.c < y.c;
  return x.d < y.d;
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  std::int64_t a = chk_add(chk_mul(x.a, y.a, "product entry a"),
                           chk_mul(x.b, y.c, "product entry a"),
                           "product entry a");
  std::int64_t b = chk_add(chk_mul(x.a, y.b, "product entry b"),
                           chk_mul(x.b, y.d, "product entry b"),
                           "product entry b");
  std::int64_t c = chk_add(chk_mul(x.c, y.a, "product entry c"),
                           chk_mul(x.d, y.c, "product entry c"),
                           "product entry c");
  std::int64_t d = chk_add(chk_mul(x.c, y.b, "product entry d"),
                           chk_mul(x.d, y.d, "product entry d"),
                           "product entry d");
  return Mat2::make(a, b, c, d);
}

Mat2 mat_inv(const Mat2& x) { return Mat2::make(x.d, -x.b, -x.c, x.a); }

std::int64_t norm_sq(const Mat2& x) {
  std::int64_t s = chk_mul(x.a, x.a, "norm_sq");
  s = chk_add(s, chk_mul(x.b, x.b, "norm_sq"), "norm_sq");
  s = chk_add(s, chk_mul(x.c, x.c, "norm_sq"), "norm_sq");
  s = chk_add(s, chk_mul(x.d, x.d, "norm_sq"), "norm_sq");
  return s;
}

std::string mat_to_string(const Mat2& x) {
  return std::to_string(x.a) + "," + std::to_string(x.b) + "," +
         std::to_string(x.c) + "," + std::to_string(x.d);
}

GroupSpec GroupSpec::create(std::vector<Mat2> generators, std::int64_t J,
                            std::array<std::int64_t, 2> v,
                            std::array<std::int64_t, 2> w,
                            std::optional<double> prune_factor,
                            std::int64_t angular_denom) {
  if (generators.empty()) throw config_error("generator list is empty");
  if (J < 1) throw config_error("parabolic step J must be >= 1");
  if (std::gcd(v[0], v[1]) != 1)
    throw config_error("v = (" + std::to_string(v[0]) + "," +
                       std::to_string(v[1]) + ") is not primitive");
  if (std::gcd(w[0], w[1]) != 1)
    throw config_error("w = (" + std::to_string(w[0]) + "," +
                       std::to_string(w[1]) + ") is not primitive");
  if (angular_denom < 1) throw config_error("angular_denom must be >= 1");
  GroupSpec g;
  g.generators = std::move(generators);
  g.J = J;
  g.v = v;
  g.w = w;
  g.angular_denom = angular_denom;
  g.prune_factor = prune_factor ? *prune_factor : g.default_prune_factor();
  if (!(g.prune_factor >= 1))
    throw config_error("prune_factor must be >= 1, got " +
                       std::to_string(g.prune_factor));
  return g;
}

double GroupSpec::default_prune_factor() const {
  double m = 0;
  for (const Mat2& gen : generators)
    m = std::max(m, std::sqrt((double)norm_sq(gen)));
  return 16.0 * m;
}

void GroupSpec::require_positioned(const char* op) const {
  if (!positioned())
    throw config_error(std::string(op) +
                       " needs v[0] != 0 and w[1] != 0 (apply precompose_fix "
                       "to reposition the vectors first)");
}

std::int64_t form_step(const GroupSpec& g, const Mat2& m) {
  std::int64_t inner = chk_add(chk_mul(m.c, g.w[0], "form step"),
                               chk_mul(m.d, g.w[1], "form step"), "form step");
  return chk_mul(chk_mul(g.v[0], inner, "form step"), g.J, "form step");
}

std::int64_t form_offset(const GroupSpec& g, const Mat2& m) {
  std::int64_t top = chk_add(chk_mul(m.a, g.w[0], "form offset"),
                             chk_mul(m.b, g.w[1], "form offset"),
                             "form offset");
  std::int64_t bot = chk_add(chk_mul(m.c, g.w[0], "form offset"),
                             chk_mul(m.d, g.w[1], "form offset"),
                             "form offset");
  return chk_add(chk_mul(g.v[0], top, "form offset"),
                 chk_mul(g.v[1], bot, "form offset"), "form offset");
}

// ---------------------------------------------------------------------------
// FlatSet128

FlatSet128::FlatSet128(std::size_t min_capacity) {
  std::size_t cap = 16;
  while (cap < min_capacity) cap <<= 1;
  slots_.assign(cap, Key{});
}

FlatSet128::Key FlatSet128::pack(const Mat2& m) {
  auto narrow = [](std::int64_t x) -> std::int32_t {
    if (x > std::numeric_limits<std::int32_t>::max() ||
        x < std::numeric_limits<std::int32_t>::min())
      throw overflow_error("ball state entry " + std::to_string(x) +
                           " exceeds the packed 32-bit search range");
    return (std::int32_t)x;
  };
  return Key{narrow(m.a), narrow(m.b), narrow(m.c), narrow(m.d)};
}

std::uint64_t FlatSet128::hash(const Key& k) {
  std::uint64_t lo =
      ((std::uint64_t)(std::uint32_t)k.a << 32) | (std::uint32_t)k.b;
  std::uint64_t hi =
      ((std::uint64_t)(std::uint32_t)k.c << 32) | (std::uint32_t)k.d;
  return splitmix64(lo) ^ (splitmix64(hi) * 0x9e3779b97f4a7c15ull);
}

bool FlatSet128::insert_key(const Key& k) {
  std::size_t mask = slots_.size() - 1;
  std::size_t i = hash(k) & mask;
  for (;;) {
    Key& slot = slots_[i];
    if (slot == Key{}) {
      slot = k;
      ++size_;
      return true;
    }
    if (slot == k) return false;
    i = (i + 1) & mask;
  }
}

bool FlatSet128::insert(const Mat2& m) {
  if (size_ * 10 >= slots_.size() * 7) grow();
  return insert_key(pack(m));
}

bool FlatSet128::contains(const Mat2& m) const {
  Key k = pack(m);
  std::size_t mask = slots_.size() - 1;
  std::size_t i = hash(k) & mask;
  for (;;) {
    const Key& slot = slots_[i];
    if (slot == Key{}) return false;
    if (slot == k) return true;
    i = (i + 1) & mask;
  }
}

void FlatSet128::grow() {
  std::vector<Key> old;
  old.swap(slots_);
  slots_.assign(old.size() * 2, Key{});
  size_ = 0;
  for (const Key& k : old)
    if (!(k == Key{})) insert_key(k);
}

// ---------------------------------------------------------------------------
// Ball enumeration

namespace {

// Shared ball search.  Explores every state reachable through products of
// norm <= prune * T; calls `visit` once per distinct state with norm < T.
// Default strategy is a hash-deduplicated breadth-first closure,
// deterministic for any worker count: expansion of a frontier is chunked,
// but merging into the visited set is serial and in chunk order, and the
// visited SET (a fixpoint) does not depend on discovery order.  With
// opt.free_tree the closure is replaced by a non-backtracking depth-first
// walk (see BallOptions::free_tree).
template <typename Visit>
void ball_search(const GroupSpec& g, double T, const BallOptions& opt,
                 Visit&& visit) {
  double prune = opt.prune_override.value_or(g.prune_factor);
  if (!(prune >= 1)) throw config_error("prune factor must be >= 1");
  if (!(T > 0)) throw config_error("ball radius T must be positive");

  const long double keep_bound = (long double)T * (long double)T;
  const long double state_bound =
      (long double)prune * T * (long double)prune * T;
  if ((long double)norm_sq(Mat2::identity()) > state_bound) return;

  std::vector<Mat2> steps;
  for (const Mat2& gen : g.generators) {
    for (const Mat2& s : {gen, mat_inv(gen)}) {
      if (std::find(steps.begin(), steps.end(), s) == steps.end())
        steps.push_back(s);
    }
  }

  if (opt.free_tree) {
    // Non-backtracking tree walk; see BallOptions::free_tree for when this
    // is exact.  The step list is closed under inversion, so every step has
    // an inverse index.
    std::vector<int> inv_idx(steps.size(), -1);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      Mat2 vi = mat_inv(steps[i]);
      auto it = std::find(steps.begin(), steps.end(), vi);
      inv_idx[i] = (int)(it - steps.begin());
    }
    struct Node {
      Mat2 m;
      int last;
    };
    std::uint64_t visited = 1;
    if ((long double)norm_sq(Mat2::identity()) < keep_bound)
      visit(Mat2::identity());
    std::vector<Node> stack{{Mat2::identity(), -1}};
    while (!stack.empty()) {
      Node n = stack.back();
      stack.pop_back();
      for (std::size_t si = 0; si < steps.size(); ++si) {
        if (n.last >= 0 && (int)si == inv_idx[n.last]) continue;
        Mat2 m = mat_mul(n.m, steps[si]);
        if ((long double)norm_sq(m) > state_bound) continue;
        if (++visited > opt.state_cap)
          throw capacity_error(
              "ball search exceeded the explored-state cap of " +
              std::to_string(opt.state_cap) +
              " (raise state_cap or lower T/prune_factor)");
        if ((long double)norm_sq(m) < keep_bound) visit(m);
        stack.push_back({m, (int)si});
      }
    }
    return;
  }

  FlatSet128 seen;
  std::vector<Mat2> frontier{Mat2::identity()};
  seen.insert(Mat2::identity());
  if ((long double)norm_sq(Mat2::identity()) < keep_bound)
    visit(Mat2::identity());

  int workers = std::max(1, opt.threads);
  std::vector<Mat2> next;
  while (!frontier.empty()) {
    next.clear();
    auto expand = [&](std::size_t lo, std::size_t hi, std::vector<Mat2>& out) {
      for (std::size_t i = lo; i < hi; ++i) {
        for (const Mat2& s : steps) {
          Mat2 m = mat_mul(frontier[i], s);
          if ((long double)norm_sq(m) <= state_bound) out.push_back(m);
        }
      }
    };
    std::vector<std::vector<Mat2>> chunks;
    if (workers == 1 || frontier.size() < 1024) {
      chunks.resize(1);
      expand(0, frontier.size(), chunks[0]);
    } else {
      chunks.resize(workers);
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errs(workers);
      std::size_t per = (frontier.size() + workers - 1) / workers;
      for (int t = 0; t < workers; ++t) {
        std::size_t lo = std::min(frontier.size(), per * (std::size_t)t);
        std::size_t hi = std::min(frontier.size(), lo + per);
        pool.emplace_back([&, t, lo, hi] {
          try {
            expand(lo, hi, chunks[t]);
          } catch (...) {
            errs[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    }
    for (const auto& chunk : chunks) {
      for (const Mat2& m : chunk) {
        if (!seen.insert(m)) continue;
        if (seen.size() > opt.state_cap)
          throw capacity_error(
              "ball search exceeded the explored-state cap of " +
              std::to_string(opt.state_cap) +
              " (raise state_cap or lower T/prune_factor)");
        next.push_back(m);
        if ((long double)norm_sq(m) < keep_bound) visit(m);
      }
    }
    frontier.swap(next);
  }
}

}  // namespace

Ball enumerate_ball(const GroupSpec& g, double T, const BallOptions& opt) {
  Ball ball;
  ball.T = T;
  ball_search(g, T, opt, [&](const Mat2& m) { ball.elements.push_back(m); });
  std::sort(ball.elements.begin(), ball.elements.end(), lex_less);
  return ball;
}

void for_each_ball_element(const GroupSpec& g, double T, const BallOptions& opt,
                           const std::function<void(const Mat2&)>& visit) {
  ball_search(g, T, opt, visit);
}

Ball filter_angular(const Ball& ball, const GroupSpec& g) {
  if (ball.angular_filtered)
    throw config_error("ball is already angular-filtered");
  Ball out;
  out.T = ball.T;
  out.angular_filtered = true;
  const long double threshold = (long double)ball.T;
  for (const Mat2& m : ball.elements) {
    std::int64_t step = form_step(g, m);
    long double lhs =
        (long double)std::llabs(step) * (long double)g.angular_denom;
    if (lhs >= threshold) out.elements.push_back(m);
  }
  return out;
}

DeltaEstimate estimate_delta(const GroupSpec& g,
                             const std::vector<double>& T_samples,
                             const BallOptions& opt) {
  if (T_samples.size() < 3)
    throw config_error("estimate_delta needs at least 3 samples");
  for (std::size_t i = 1; i < T_samples.size(); ++i)
    if (!(T_samples[i] > T_samples[i - 1]))
      throw config_error("estimate_delta samples must be strictly increasing");

  // One search at the largest radius; per-sample counts by sorted norms.
  std::vector<std::int64_t> norms;
  for_each_ball_element(g, T_samples.back(), opt,
                        [&](const Mat2& m) { norms.push_back(norm_sq(m)); });
  std::sort(norms.begin(), norms.end());

  DeltaEstimate est;
  for (double T : T_samples) {
    long double bound = (long double)T * (long double)T;
    std::size_t cnt =
        std::upper_bound(norms.begin(), norms.end(), bound,
                         [](long double b, std::int64_t n) {
                           return b <= (long double)n;
                         }) -
        norms.begin();
    if (cnt == 0)
      throw config_error("estimate_delta: sample T = " + std::to_string(T) +
                         " produced an empty ball (insufficient data)");
    est.samples.emplace_back(T, (std::uint64_t)cnt);
  }

  double n = (double)est.samples.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [T, cnt] : est.samples) {
    double x = std::log(T), y = std::log((double)cnt);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0) throw config_error("estimate_delta: degenerate samples");
  est.slope = (n * sxy - sx * sy) / denom;
  est.delta_hat = est.slope / 2;
  double intercept = (sy - est.slope * sx) / n;
  double rss = 0;
  for (auto& [T, cnt] : est.samples) {
    double r = std::log((double)cnt) - (intercept + est.slope * std::log(T));
    rss += r * r;
  }
  est.residual = std::sqrt(rss / n);
  return est;
}

// ---------------------------------------------------------------------------
// Level-2 helpers

PrimitiveReduction primitive_reduce(const Mat2& x) {
  bool level2 = (x.a % 2 != 0) && (x.d % 2 != 0) && (x.b % 2 == 0) &&
                (x.c % 2 == 0);
  if (!level2)
    throw config_error("primitive_reduce input " + mat_to_string(x) +
                       " does not match the level-2 pattern "
                       "(a,d odd; b,c even)");
  if (x.d == 0)
    throw config_error("primitive_reduce: d = 0, matrix is not reducible");

  // Left powers of (1,2;0,1) shift b by 2md; right powers of (1,0;2,1)
  // shift c by 2nd.  b is even and d odd, so b mod 2|d| never lands on
  // +-|d| and the representative with |b + 2md| < |d| is unique; same for c.
  auto shift_count = [&](std::int64_t t) {
    // smallest-|result| representative of t modulo 2d
    std::int64_t two_d = chk_mul(2, x.d, "primitive_reduce");
    std::int64_t r = t % two_d;
    std::int64_t ad = std::llabs(x.d);
    if (r > ad) r -= std::llabs(two_d);
    if (r < -ad) r += std::llabs(two_d);
    return (t - r) / two_d;  // t - k*2d = r
  };
  std::int64_t m = -shift_count(x.b);
  std::int64_t n = -shift_count(x.c);

  Mat2 left = Mat2::make(1, chk_mul(2, m, "primitive_reduce"), 0, 1);
  Mat2 right = Mat2::make(1, 0, chk_mul(2, n, "primitive_reduce"), 1);
  PrimitiveReduction out;
  out.reduced = mat_mul(mat_mul(left, x), right);
  out.m = m;
  out.n = n;
  if (std::llabs(out.reduced.b) >= std::llabs(x.d) ||
      std::llabs(out.reduced.c) >= std::llabs(x.d) || out.reduced.d != x.d)
    throw numeric_error("primitive_reduce postcondition failed for " +
                        mat_to_string(x));
  return out;
}

bool word_exponent_test(const std::vector<int>& word) {
  std::int64_t first = 0, second = 0;
  for (int letter : word) {
    switch (letter) {
      case 1:
        ++first;
        break;
      case -1:
        --first;
        break;
      case 2:
        ++second;
        break;
      case -2:
        --second;
        break;
      default:
        throw config_error("word letters must be in {1,-1,2,-2}, got " +
                           std::to_string(letter));
    }
  }
  return first == 0 && second == 0;
}

}  // namespace thinorbit
