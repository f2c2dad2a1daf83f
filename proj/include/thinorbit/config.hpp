#pragma once

// Flat `key = value` run configuration: parsing, canonical serialization,
// and materialization of the group spec / parameter tuple it describes.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thinorbit/matgroup.hpp"
#include "thinorbit/params.hpp"

namespace thinorbit {

struct RunConfig {
  // group: either a registered fixture name or explicit fields
  std::string fixture;
  std::vector<Mat2> generators;  // "a,b,c,d;a,b,c,d;..."
  std::int64_t J = 1;
  std::array<std::int64_t, 2> v{1, 0};
  std::array<std::int64_t, 2> w{0, 1};
  std::optional<double> prune_factor;
  std::int64_t angular_denom = 100;

  // run scales
  double N = 2500;
  std::optional<double> T;       // direct radius; wins over T_exponent
  double T_exponent = 1.0 / 3.0; // T = N^T_exponent when T is unset
  double eps0 = 0.3;
  double eps1 = 1e-3;
  std::optional<double> Q0;      // desk-scale overrides of the exponents
  std::optional<double> K0;
  double delta = 1.0;

  // capacities and process knobs
  int threads = 1;
  std::uint64_t state_cap = 40'000'000;
  std::uint64_t quotient_cap = 10'000'000;
  std::uint64_t seed = 0;
  bool minor_arcs = false;
  bool oracle = false;           // brute-force reference paths
  bool free_tree = false;        // memory-light search for free generators
  std::string asum = "full";     // "full" | "coprime" a-sum in the series
  std::int64_t prime_bound = 50;
  int power_bound = 4;

  // The group this config describes: the fixture when one is named
  // (explicit group fields must then be absent), else the explicit fields.
  GroupSpec group() const;

  double resolved_T() const;     // T if set, else N^T_exponent
  double resolved_Q0() const;    // Q0 if set, else the desk default 6
  double resolved_K0() const;    // K0 if set, else the desk default 8

  // explicit_params over the resolved values (desk-scale semantics:
  // violations recorded, not fatal).
  CircleParams params() const;

  BallOptions ball_options() const;
};

// Parses `key = value` lines; '#' starts a comment; unknown keys fail.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical form: fixed key order, unset optional fields omitted, floats
// with 17 significant digits.  parse(serialize(c)) re-serializes
// byte-identically.
std::string serialize_config(const RunConfig& c);

}  // namespace thinorbit
