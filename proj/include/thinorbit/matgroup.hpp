#pragma once

// Exact 2x2 integer matrix arithmetic and pruned ball enumeration for
// finitely generated subgroups of SL(2,Z).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thinorbit/common.hpp"

namespace thinorbit {

// Determinant-one integer matrix (a b; c d).  All arithmetic is overflow
// checked; construction validates the determinant exactly.
struct Mat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  static Mat2 make(std::int64_t a, std::int64_t b, std::int64_t c,
                   std::int64_t d);
  static Mat2 identity() { return Mat2{}; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

// Lexicographic order on (a,b,c,d); canonical serialization order.
bool lex_less(const Mat2& x, const Mat2& y);

Mat2 mat_mul(const Mat2& x, const Mat2& y);
Mat2 mat_inv(const Mat2& x);
std::int64_t norm_sq(const Mat2& x);

// "a,b,c,d" in decimal.
std::string mat_to_string(const Mat2& x);

// One problem instance: the group generators, the parabolic step J of the
// upper-triangular subgroup (1, J n; 0, 1), the two primitive vectors, and
// enumeration knobs.
struct GroupSpec {
  std::vector<Mat2> generators;
  std::int64_t J = 1;
  std::array<std::int64_t, 2> v{1, 0};
  std::array<std::int64_t, 2> w{0, 1};
  double prune_factor = 0;        // ball search slack; >= 1
  std::int64_t angular_denom = 100;  // keep |step| >= T/angular_denom

  // Validates: generators nonempty with determinant 1, J >= 1, v and w
  // primitive, prune_factor >= 1 (defaulting to 16 * max generator norm),
  // angular_denom >= 1.  v[0] != 0 / w[1] != 0 is NOT enforced here; the
  // operations that need a nondegenerate linear form call
  // require_positioned(), and precompose_fix() repairs a violating spec.
  static GroupSpec create(std::vector<Mat2> generators, std::int64_t J,
                          std::array<std::int64_t, 2> v,
                          std::array<std::int64_t, 2> w,
                          std::optional<double> prune_factor = std::nullopt,
                          std::int64_t angular_denom = 100);

  bool positioned() const { return v[0] != 0 && w[1] != 0; }
  void require_positioned(const char* op) const;

  double default_prune_factor() const;  // 16 * max generator norm
};

// Progression step of the form attached to gamma: J * v1 * (c w1 + d w2).
std::int64_t form_step(const GroupSpec& g, const Mat2& m);
// Progression offset: v1 (a w1 + b w2) + v2 (c w1 + d w2) = <v gamma, w>.
std::int64_t form_offset(const GroupSpec& g, const Mat2& m);

// The finite set {gamma : ||gamma|| < T}, optionally post-filtered by the
// angular condition |step| >= T/angular_denom.
struct Ball {
  double T = 0;
  std::vector<Mat2> elements;  // sorted lexicographically, no duplicates
  bool angular_filtered = false;
};

struct BallOptions {
  std::uint64_t state_cap = 40'000'000;  // explored-state limit
  int threads = 1;
  std::optional<double> prune_override;  // overrides g.prune_factor

  // Replace the hash-deduplicated breadth-first closure with a
  // non-backtracking depth-first tree walk (never multiply by the inverse of
  // the step that was just applied).  This visits each group element exactly
  // once precisely when the generators freely generate the group: free
  // reduction only deletes prefix states from a generator path, so an element
  // reachable within the prune bound is reachable along its reduced word, and
  // distinct reduced words are distinct elements.  Memory drops from
  // O(#states) to O(longest reduced word), which is what makes large radii
  // affordable.  If the generators satisfy relations the walk revisits
  // elements (and a bounded cycle spins until state_cap trips), so the tests
  // validate the built-in groups by checking this walk against the default
  // search.  threads is ignored in this mode.
  bool free_tree = false;
};

// Breadth-first closure over generators and their inverses, discarding
// frontier states whose norm exceeds prune_factor * T.  Completeness at a
// given prune factor is validated empirically against reference
// enumerations (see tests); it is not guaranteed a priori.
Ball enumerate_ball(const GroupSpec& g, double T, const BallOptions& opt = {});

// Same search, but streams each ball element to `visit` instead of storing
// the element list (search bookkeeping is still built).  Visit order is
// unspecified; the set of visited elements is deterministic.
void for_each_ball_element(const GroupSpec& g, double T, const BallOptions& opt,
                           const std::function<void(const Mat2&)>& visit);

Ball filter_angular(const Ball& ball, const GroupSpec& g);

// Least-squares fit of log #ball against log T; growth exponent estimate.
struct DeltaEstimate {
  std::vector<std::pair<double, std::uint64_t>> samples;  // (T_i, count_i)
  double slope = 0;      // d log(count) / d log(T)
  double delta_hat = 0;  // slope / 2
  double residual = 0;   // rms residual of the fit in log space
};

DeltaEstimate estimate_delta(const GroupSpec& g,
                             const std::vector<double>& T_samples,
                             const BallOptions& opt = {});

// Row/column reduction for elements of the level-2 congruence pattern
// (a, d odd; b, c even): left-multiply by powers of (1,2;0,1) and
// right-multiply by powers of (1,0;2,1) until |b| < |d| and |c| < |d|.
// d is untouched.  Returns (reduced, m, n) with reduced = L^m * x * R^n.
struct PrimitiveReduction {
  Mat2 reduced;
  std::int64_t m = 0;
  std::int64_t n = 0;
};

PrimitiveReduction primitive_reduce(const Mat2& x);

// A word over two letters with signs: +1/-1 for the first generator and its
// inverse, +2/-2 for the second.  True iff both exponent sums vanish
// (membership in the commutator subgroup of a free group of rank 2).
bool word_exponent_test(const std::vector<int>& word);

// Open-addressing set of matrices with entries in the 32-bit range, 16
// bytes per slot.  Used as the deduplication structure of the ball search;
// exposed for tests.
class FlatSet128 {
 public:
  explicit FlatSet128(std::size_t min_capacity = 1 << 12);

  // True if the matrix was not present.  Throws overflow_error if an entry
  // leaves the packed 32-bit range (the zero matrix is the empty-slot
  // sentinel and can never be a valid element).
  bool insert(const Mat2& m);
  bool contains(const Mat2& m) const;
  std::size_t size() const { return size_; }

 private:
  struct Key {
    std::int32_t a = 0, b = 0, c = 0, d = 0;
    friend bool operator==(const Key&, const Key&) = default;
  };
  static Key pack(const Mat2& m);
  static std::uint64_t hash(const Key& k);
  bool insert_key(const Key& k);
  void grow();

  std::vector<Key> slots_;
  std::size_t size_ = 0;
};

}  // namespace thinorbit
