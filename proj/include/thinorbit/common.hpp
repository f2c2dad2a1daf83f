#pragma once

// Shared error taxonomy and checked 64-bit arithmetic.
//
// All integer work in this library is exact: matrix products, linear forms,
// congruence arithmetic.  Anything that could leave the safe range aborts
// with overflow_error instead of wrapping.  The guard is intentionally far
// below INT64_MAX so that a handful of follow-up additions on an unchecked
// path still cannot wrap.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace thinorbit {

inline constexpr std::int64_t kOverflowGuard =
    std::numeric_limits<std::int64_t>::max() / 8;

// exit-code 1: bad configuration, violated precondition, unusable input
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit-code 2: parameter system has no solution; names the failing constraint
struct infeasible_error : std::runtime_error {
  std::string constraint;
  infeasible_error(const std::string& cname, const std::string& msg)
      : std::runtime_error(msg), constraint(cname) {}
};

// exit-code 3: exact integer arithmetic left the guarded range
struct overflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit-code 4: a size/iteration cap was exceeded (search spaces, quotients)
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit-code 4 as well: a numeric routine could not reach requested accuracy
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::int64_t chk_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r) || r > kOverflowGuard ||
      r < -kOverflowGuard)
    throw overflow_error(std::string("integer overflow in ") + what + ": " +
                         std::to_string(a) + " + " + std::to_string(b));
  return r;
}

inline std::int64_t chk_sub(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r) || r > kOverflowGuard ||
      r < -kOverflowGuard)
    throw overflow_error(std::string("integer overflow in ") + what + ": " +
                         std::to_string(a) + " - " + std::to_string(b));
  return r;
}

inline std::int64_t chk_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r) || r > kOverflowGuard ||
      r < -kOverflowGuard)
    throw overflow_error(std::string("integer overflow in ") + what + ": " +
                         std::to_string(a) + " * " + std::to_string(b));
  return r;
}

// SplitMix64, used by the open-addressing sets below and for seeding.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace thinorbit
